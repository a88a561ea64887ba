import math

import numpy as np
import pytest

from abdecide.model import Gaussian
from abdecide.posterior import (
    Z95,
    credible_z,
    joint_success_probability,
    posterior_update,
    summarize,
)
from abdecide.prior import FLAT

from conftest import random_psd


class TestPosteriorUpdate:
    def test_flat_prior_passes_likelihood_through(self):
        x = np.array([5.0, -2.0])
        sigma = np.eye(2)
        post = posterior_update(FLAT, x, sigma)
        assert np.array_equal(post.mean, x)
        assert np.array_equal(post.cov, sigma)

    def test_textbook_univariate_conjugacy(self):
        post = posterior_update(Gaussian([0.0], [[1.0]]), [2.0], [[1.0]])
        np.testing.assert_allclose(post.mean, [1.0], atol=1e-12)
        np.testing.assert_allclose(post.cov, [[0.5]], atol=1e-12)

    def test_tiny_prior_variance_pins_posterior_to_prior_mean(self):
        prior = Gaussian([3.0, -1.0], 1e-12 * np.eye(2))
        post = posterior_update(prior, [100.0, 100.0], np.eye(2))
        np.testing.assert_allclose(post.mean, prior.mean, atol=1e-6)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            posterior_update(Gaussian([0.0], [[1.0]]), [1.0, 2.0], np.eye(2))
        with pytest.raises(ValueError):
            posterior_update(FLAT, [1.0, 2.0], np.eye(3))

    def test_precision_additivity(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 5))
            prior = Gaussian(rng.standard_normal(n), random_psd(rng, n, jitter=1e-6))
            sigma = random_psd(rng, n, jitter=1e-6)
            post = posterior_update(prior, rng.standard_normal(n), sigma)
            lhs = np.linalg.inv(post.cov)
            rhs = np.linalg.inv(sigma) + np.linalg.inv(prior.cov)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-8)

    def test_contraction_vs_likelihood(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 5))
            prior = Gaussian(rng.standard_normal(n), random_psd(rng, n, jitter=1e-6))
            sigma = random_psd(rng, n, jitter=1e-6)
            post = posterior_update(prior, rng.standard_normal(n), sigma)
            assert np.linalg.eigvalsh(sigma - post.cov).min() >= -1e-10

    def test_mean_is_matrix_convex_combination(self, rng):
        # tau = A x + (I - A) m0 with A = Delta Sigma^-1.
        for _ in range(10):
            n = 3
            prior = Gaussian(rng.standard_normal(n), random_psd(rng, n, jitter=1e-6))
            sigma = random_psd(rng, n, jitter=1e-6)
            x = rng.standard_normal(n)
            post = posterior_update(prior, x, sigma)
            a = post.cov @ np.linalg.inv(sigma)
            recon = a @ x + (np.eye(n) - a) @ prior.mean
            np.testing.assert_allclose(recon, post.mean, atol=1e-8)

    def test_univariate_width_ordering_and_between_estimates(self, rng):
        # Homoscedastic 1-D histories: width grows with k and the k=1
        # estimate sits between complete pooling and no pooling.
        from abdecide.prior import build_prior
        from conftest import make_record

        for _ in range(5):
            history = [
                make_record(f"h{i}", float(i), [float(rng.normal(1.0, 1.0))], [[1.0]])
                for i in range(5)
            ]
            x_t, var_t = float(rng.normal(3.0, 1.0)), 1.0
            widths, means = {}, {}
            for k in (0.0, 1.0, math.inf):
                post = posterior_update(build_prior(history, k), [x_t], [[var_t]])
                s = summarize(post, k)
                widths[k] = s.intervals[0, 1] - s.intervals[0, 0]
                means[k] = post.mean[0]
            assert widths[0.0] <= widths[1.0] + 1e-12
            assert widths[1.0] <= widths[math.inf] + 1e-12
            lo, hi = sorted((means[0.0], means[math.inf]))
            assert lo - 1e-12 <= means[1.0] <= hi + 1e-12


class TestSummarize:
    def test_null_interval(self):
        s = summarize(Gaussian([0.0], [[1.0]]), math.inf)
        np.testing.assert_allclose(s.intervals, [[-Z95, Z95]])
        assert not s.significant[0]
        assert abs(Z95 - 1.959964) < 1e-6

    def test_significant_interval(self):
        s = summarize(Gaussian([10.0], [[1.0]]), 1.0)
        np.testing.assert_allclose(s.intervals, [[10.0 - Z95, 10.0 + Z95]])
        assert s.significant[0]

    def test_degenerate_point_mass(self):
        s = summarize(Gaussian([3.0], [[0.0]]), 0.0)
        np.testing.assert_allclose(s.intervals, [[3.0, 3.0]])
        assert s.significant[0]
        s0 = summarize(Gaussian([0.0], [[0.0]]), 0.0)
        assert not s0.significant[0]

    def test_significance_iff_zero_outside(self, rng):
        for _ in range(50):
            mean = float(rng.normal(0, 2))
            var = float(rng.uniform(0.1, 4))
            s = summarize(Gaussian([mean], [[var]]), 1.0)
            lo, hi = s.intervals[0]
            assert bool(s.significant[0]) == (0.0 < lo or hi < 0.0)

    def test_custom_level(self):
        assert credible_z(0.95) == pytest.approx(Z95, abs=1e-12)
        s = summarize(Gaussian([0.0], [[1.0]]), 1.0, level=0.5)
        assert s.intervals[0, 1] == pytest.approx(0.6744897501960817)
        with pytest.raises(ValueError):
            credible_z(1.5)


class TestJointSuccess:
    def test_univariate_symmetry(self):
        post = Gaussian([0.0], [[1.0]])
        js = joint_success_probability(post, ["greater"], [0.0], samples=20000, seed=1)
        assert abs(js.probability - 0.5) <= 3 * js.standard_error + 1e-9

    def test_bivariate_independent(self):
        post = Gaussian([0.0, 0.0], np.eye(2))
        js = joint_success_probability(
            post, ["greater", "greater"], [0.0, 0.0], samples=40000, seed=2
        )
        assert abs(js.probability - 0.25) <= 3 * js.standard_error + 1e-9

    def test_correlated_orthant_oracle(self):
        # P(X>0, Y>0) = 1/4 + asin(rho)/(2 pi) for standard bivariate normal.
        rho = 0.9
        oracle = 0.25 + math.asin(rho) / (2 * math.pi)
        post = Gaussian([0.0, 0.0], [[1.0, rho], [rho, 1.0]])
        js = joint_success_probability(
            post, ["greater", "greater"], [0.0, 0.0], samples=60000, seed=3
        )
        assert oracle == pytest.approx(0.4282, abs=5e-5)
        assert abs(js.probability - oracle) <= 3 * js.standard_error + 1e-9

    def test_less_direction(self):
        post = Gaussian([0.0, 0.0], np.eye(2))
        js = joint_success_probability(
            post, ["greater", "less"], [0.0, 0.0], samples=40000, seed=4
        )
        assert abs(js.probability - 0.25) <= 3 * js.standard_error + 1e-9

    def test_deterministic_given_seed(self):
        post = Gaussian([0.1], [[2.0]])
        a = joint_success_probability(post, ["greater"], [0.0], samples=5000, seed=9)
        b = joint_success_probability(post, ["greater"], [0.0], samples=5000, seed=9)
        assert a.probability == b.probability

    def test_minimum_samples_enforced(self):
        with pytest.raises(ValueError):
            joint_success_probability(Gaussian([0.0], [[1.0]]), ["greater"], [0.0], samples=10)
