import numpy as np
import pytest

from abdecide.bootstrap import (
    BootstrapConfig,
    bootstrap_replicates,
    bootstrap_sigma,
    estimate_effects,
    two_sample_variance,
)
from abdecide.model import UnitOutcomes


def units_from_arrays(treatment, control):
    out = [UnitOutcomes(f"t{i}", "treatment", row) for i, row in enumerate(treatment)]
    out += [UnitOutcomes(f"c{i}", "control", row) for i, row in enumerate(control)]
    return out


class TestEstimateEffects:
    def test_hand_arithmetic(self):
        data = units_from_arrays([[2.0], [4.0]], [[1.0], [1.0]])
        assert estimate_effects(data) == pytest.approx([2.0])

    def test_identical_arms_give_zero(self):
        rows = [[1.0, -2.0], [3.0, 4.0]]
        data = units_from_arrays(rows, rows)
        assert np.allclose(estimate_effects(data), 0.0)

    def test_empty_arm_errors(self):
        data = [UnitOutcomes("t0", "treatment", [1.0])]
        with pytest.raises(ValueError):
            estimate_effects(data)


class TestBootstrapSigma:
    def test_identical_units_give_zero_matrix(self):
        data = units_from_arrays([[2.0, 1.0]] * 4, [[2.0, 1.0]] * 4)
        sigma = bootstrap_sigma(data, BootstrapConfig(replicates=50, seed=1))
        assert np.allclose(sigma, 0.0)

    def test_deterministic_given_seed(self, rng):
        data = units_from_arrays(rng.standard_normal((8, 2)), rng.standard_normal((9, 2)))
        cfg = BootstrapConfig(replicates=100, seed=42)
        assert np.array_equal(bootstrap_sigma(data, cfg), bootstrap_sigma(data, cfg))

    def test_replicates_prefix_stable_when_b_grows(self, rng):
        data = units_from_arrays(rng.standard_normal((6, 1)), rng.standard_normal((6, 1)))
        small = bootstrap_replicates(data, BootstrapConfig(replicates=10, seed=7))
        large = bootstrap_replicates(data, BootstrapConfig(replicates=25, seed=7))
        assert np.array_equal(large[:10], small)

    def test_doubling_outcomes_scales_by_four(self, rng):
        t = rng.standard_normal((7, 2))
        c = rng.standard_normal((6, 2))
        cfg = BootstrapConfig(replicates=60, seed=3)
        base = bootstrap_sigma(units_from_arrays(t, c), cfg)
        doubled = bootstrap_sigma(units_from_arrays(2 * t, 2 * c), cfg)
        assert np.array_equal(doubled, 4.0 * base)

    def test_output_is_symmetric_psd(self, rng):
        data = units_from_arrays(rng.standard_normal((10, 3)), rng.standard_normal((12, 3)))
        sigma = bootstrap_sigma(data, BootstrapConfig(replicates=200, seed=5))
        assert np.array_equal(sigma, sigma.T)
        assert np.linalg.eigvalsh(sigma).min() >= -1e-12

    def test_too_few_units_errors(self):
        data = units_from_arrays([[1.0]], [[0.0], [1.0]])
        with pytest.raises(ValueError):
            bootstrap_sigma(data, BootstrapConfig(replicates=10, seed=0))

    def test_replicates_below_two_rejected(self):
        with pytest.raises(ValueError):
            BootstrapConfig(replicates=1, seed=0)

    def test_matches_analytic_two_sample_variance(self, rng):
        # As B grows the diagonal converges to s_T^2/n_T + s_C^2/n_C; with
        # B=4000 the bootstrap SE of the variance is ~2% so 3 SE ~ 7%.
        t = rng.normal(0.3, 1.1, size=(120, 1))
        c = rng.normal(0.0, 0.9, size=(140, 1))
        data = units_from_arrays(t, c)
        sigma = bootstrap_sigma(data, BootstrapConfig(replicates=4000, seed=11))
        oracle = two_sample_variance(data)[0]
        # chi-square-ish spread of a variance over B replicates
        rel_3se = 3.0 * np.sqrt(2.0 / 4000)
        assert abs(sigma[0, 0] - oracle) <= (rel_3se + 0.02) * oracle
