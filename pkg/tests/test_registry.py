import numpy as np
import pytest

from abdecide.model import DuplicateIdError, MetricSchema, StorageError
from abdecide.registry import Registry, read_units_csv, write_units_csv
from abdecide.model import UnitOutcomes

from conftest import make_record


def test_append_then_list(registry_path):
    reg = Registry(registry_path)
    reg.append(make_record("E1", 1.0, [0.0], [[1.0]]))
    assert [r.id for r in reg.snapshot()] == ["E1"]


def test_order_is_timestamp_then_id(registry_path):
    reg = Registry(registry_path)
    reg.append(make_record("E2", 5.0, [0.0], [[1.0]]))
    reg.append(make_record("E1", 3.0, [0.0], [[1.0]]))
    reg.append(make_record("E0", 5.0, [0.0], [[1.0]]))
    assert [r.id for r in reg.snapshot()] == ["E1", "E0", "E2"]


def test_duplicate_id_rejected(registry_path):
    reg = Registry(registry_path)
    reg.append(make_record("E1", 1.0, [0.0], [[1.0]]))
    with pytest.raises(DuplicateIdError):
        reg.append(make_record("E1", 2.0, [0.0], [[1.0]]))


def test_invalid_record_rejected(registry_path):
    reg = Registry(registry_path)
    with pytest.raises(ValueError):
        reg.append(make_record("bad", 1.0, [0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]]))


def test_persistence_round_trip(registry_path, rng):
    reg = Registry(registry_path)
    a = rng.standard_normal((2, 2))
    rec = make_record("E1", 7.5, rng.standard_normal(2), a @ a.T)
    reg.append(rec)
    reloaded = Registry(registry_path)
    back = reloaded.get("E1")
    assert np.array_equal(back.x, rec.x)
    assert np.array_equal(back.sigma, rec.sigma)


def test_corrupt_line_raises_storage_error(registry_path):
    registry_path.write_text("not json\n")
    with pytest.raises(StorageError):
        Registry(registry_path)


def test_history_strict_inequality_and_schema_filter(registry_path):
    reg = Registry(registry_path)
    for t in (1.0, 2.0, 3.0):
        reg.append(make_record(f"E{t}", t, [0.0], [[1.0]], names=("m",)))
    reg.append(make_record("other", 0.5, [0.0, 0.0], np.eye(2), names=("a", "b")))
    schema = MetricSchema(names=("m",))
    hist = reg.history(3.0, schema)
    assert [r.id for r in hist] == ["E1.0", "E2.0"]
    assert reg.history(0.0, schema) == []
    everything = reg.history(np.inf, schema)
    assert [r.id for r in everything] == ["E1.0", "E2.0", "E3.0"]


def test_units_csv_round_trip(tmp_path):
    schema = MetricSchema(names=("rev", "cost"))
    units = [
        UnitOutcomes("u1", "treatment", [1.25, -0.5]),
        UnitOutcomes("u2", "control", [0.75, 0.125]),
    ]
    path = tmp_path / "units.csv"
    write_units_csv(path, schema, units)
    schema2, units2 = read_units_csv(path)
    assert schema2.matches(schema)
    assert units2[0].arm == "treatment"
    assert np.array_equal(units2[0].outcomes, units[0].outcomes)
    assert np.array_equal(units2[1].outcomes, units[1].outcomes)


def test_units_csv_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("id,group,m1\nu1,treatment,1.0\n")
    with pytest.raises(ValueError):
        read_units_csv(path)
