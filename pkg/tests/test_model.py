import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abdecide.model import (
    ExperimentRecord,
    MetricSchema,
    UnitOutcomes,
    validate_record,
)

from conftest import make_record


class TestMetricSchema:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            MetricSchema(names=())

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            MetricSchema(names=("a", "a"))

    def test_match_is_order_sensitive(self):
        a = MetricSchema(names=("x", "y"))
        b = MetricSchema(names=("y", "x"))
        assert not a.matches(b)
        assert a.matches(MetricSchema(names=("x", "y"), units=("$", "ct")))


class TestValidateRecord:
    def test_identity_sigma_ok(self):
        rec = make_record("e", 0.0, [0.0, 0.0], np.eye(2))
        assert validate_record(rec).ok

    def test_indefinite_sigma_flagged(self):
        # [[1,2],[2,1]] has eigenvalues 3 and -1.
        rec = make_record("e", 0.0, [0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])
        result = validate_record(rec)
        assert not result.ok
        assert any("PSD" in v for v in result.violations)

    def test_dimension_mismatch(self):
        rec = make_record("e", 0.0, [1.0, 2.0, 3.0], np.eye(2), names=("a", "b"))
        result = validate_record(rec)
        assert not result.ok
        assert any("dimension mismatch" in v for v in result.violations)

    def test_asymmetric_sigma_flagged(self):
        rec = make_record("e", 0.0, [0.0, 0.0], [[1.0, 0.5], [0.1, 1.0]])
        result = validate_record(rec)
        assert any("symmetric" in v for v in result.violations)

    def test_duplicate_id_needs_context(self):
        rec = make_record("e", 0.0, [0.0], [[1.0]])
        assert validate_record(rec).ok
        result = validate_record(rec, existing_ids={"e"})
        assert any("duplicate id" in v for v in result.violations)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=2**32 - 1))
    def test_constructed_psd_always_accepted(self, n, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((n, n))
        rec = make_record("e", 0.0, rng.standard_normal(n), a @ a.T)
        assert validate_record(rec).ok, validate_record(rec).violations


class TestSerialization:
    def test_round_trip_bit_exact(self, rng):
        a = rng.standard_normal((3, 3))
        rec = make_record(
            "exp-1",
            1700000000.25,
            rng.standard_normal(3),
            a @ a.T,
            treatment_label="(A1, B2)",
            provenance="bootstrapped",
        )
        back = ExperimentRecord.from_json_line(rec.to_json_line())
        assert back.id == rec.id
        assert back.timestamp == rec.timestamp
        assert back.schema == rec.schema
        assert back.treatment_label == rec.treatment_label
        assert back.provenance == rec.provenance
        assert np.array_equal(back.x, rec.x)
        assert np.array_equal(back.sigma, rec.sigma)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_round_trip_property(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        a = rng.standard_normal((n, n)) * 10.0 ** rng.integers(-6, 6)
        rec = make_record("r", float(rng.standard_normal()), rng.standard_normal(n), a @ a.T)
        back = ExperimentRecord.from_json_line(rec.to_json_line())
        assert np.array_equal(back.x, rec.x)
        assert np.array_equal(back.sigma, rec.sigma)
        assert back.timestamp == rec.timestamp

    def test_field_names_are_the_contract(self):
        rec = make_record("e", 0.0, [1.0], [[2.0]])
        d = rec.to_json_dict()
        assert set(d) == {
            "id", "timestamp", "metrics", "x", "sigma", "treatment_label", "provenance",
        }

    def test_plain_metric_names_accepted(self):
        rec = ExperimentRecord.from_json_dict(
            {"id": "e", "timestamp": 0, "metrics": ["a", "b"],
             "x": [0.0, 0.0], "sigma": [[1.0, 0.0], [0.0, 1.0]]}
        )
        assert rec.schema.names == ("a", "b")


class TestUnitOutcomes:
    def test_rejects_bad_arm(self):
        with pytest.raises(ValueError):
            UnitOutcomes(unit_id="u", arm="placebo", outcomes=[1.0])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            UnitOutcomes(unit_id="u", arm="control", outcomes=[np.nan])
