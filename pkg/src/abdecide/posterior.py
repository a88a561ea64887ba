"""Conjugate posterior over treatment effects, intervals, and significance.

Combining a Gaussian prior N(m0, Omega) with the experiment likelihood
N(x_t, Sigma_t) gives the posterior N(tau, Delta) with

    Delta = (Sigma_t^-1 + Omega^-1)^-1
    tau   = Delta (Sigma_t^-1 x_t + Omega^-1 m0).

The precision sum is factorized once and reused for both mean and
covariance. A flat prior passes the likelihood through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.stats import norm

from .linalg import cho_factor_pd, pd_inverse, symmetrize
from .model import Gaussian
from .prior import FlatPrior, format_k

DEFAULT_CREDIBLE_LEVEL = 0.95
# Central normal quantile for the default 95% level.
Z95 = 1.959963984540054


def credible_z(level: float) -> float:
    if not 0.0 < level < 1.0:
        raise ValueError(f"credible level must be in (0, 1), got {level}")
    return float(norm.ppf(0.5 + level / 2.0))


def posterior_update(
    prior: Gaussian | FlatPrior, x_t: np.ndarray, sigma_t: np.ndarray
) -> Gaussian:
    """Posterior N(tau, Delta) for one experiment under the given prior."""
    x_t = np.asarray(x_t, dtype=float).reshape(-1)
    sigma_t = np.asarray(sigma_t, dtype=float)
    n = x_t.size
    if sigma_t.shape != (n, n):
        raise ValueError(
            f"sigma_t shape {sigma_t.shape} does not match x_t of length {n}"
        )
    if isinstance(prior, FlatPrior):
        return Gaussian(mean=x_t.copy(), cov=sigma_t.copy())
    if prior.dim != n:
        raise ValueError(f"prior dimension {prior.dim} does not match data ({n})")
    sigma_inv = pd_inverse(sigma_t, what="sigma_t")
    omega_inv = pd_inverse(prior.cov, what="prior covariance")
    precision = symmetrize(sigma_inv + omega_inv)
    factor, _ = cho_factor_pd(precision, what="posterior precision")
    delta = symmetrize(sla.cho_solve(factor, np.eye(n)))
    tau = sla.cho_solve(factor, sigma_inv @ x_t + omega_inv @ prior.mean)
    return Gaussian(mean=tau, cov=delta)


@dataclass
class PosteriorSummary:
    gaussian: Gaussian
    intervals: np.ndarray  # (n, 2) central credible intervals
    significant: np.ndarray  # (n,) bool: interval excludes 0
    k_used: float
    credible_level: float = DEFAULT_CREDIBLE_LEVEL

    def to_json_dict(self, metrics=None, experiment_id=None) -> dict:
        d: dict = {}
        if experiment_id is not None:
            d["experiment_id"] = experiment_id
        d["k"] = format_k(self.k_used)
        d["credible_level"] = self.credible_level
        if metrics is not None:
            d["metrics"] = list(metrics)
        d["mean"] = self.gaussian.mean.tolist()
        d["cov"] = self.gaussian.cov.tolist()
        d["intervals"] = self.intervals.tolist()
        d["significant"] = [bool(s) for s in self.significant]
        return d


def summarize(
    post: Gaussian, k: float, level: float = DEFAULT_CREDIBLE_LEVEL
) -> PosteriorSummary:
    """Central credible intervals and interval-excludes-zero significance flags."""
    z = credible_z(level)
    sd = np.sqrt(np.clip(np.diag(post.cov), 0.0, None))
    low = post.mean - z * sd
    high = post.mean + z * sd
    significant = (low > 0.0) | (high < 0.0)
    return PosteriorSummary(
        gaussian=post,
        intervals=np.column_stack([low, high]),
        significant=significant,
        k_used=k,
        credible_level=level,
    )


@dataclass
class JointSuccess:
    probability: float
    standard_error: float
    samples: int
    seed: int
    directions: list[str] = field(default_factory=list)
    thresholds: list[float] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "probability": self.probability,
            "standard_error": self.standard_error,
            "samples": self.samples,
            "seed": self.seed,
            "directions": self.directions,
            "thresholds": self.thresholds,
        }


def joint_success_probability(
    post: Gaussian,
    directions: list[str],
    thresholds,
    samples: int = 10000,
    seed: int = 0,
) -> JointSuccess:
    """Monte Carlo P(every metric beats its threshold in its direction).

    Deterministic given the seed; the reported standard error is the
    binomial MC error sqrt(p(1-p)/samples).
    """
    if samples < 1000:
        raise ValueError("joint success probability needs >= 1000 samples")
    thresholds = np.asarray(thresholds, dtype=float).reshape(-1)
    if len(directions) != post.dim or thresholds.size != post.dim:
        raise ValueError("directions/thresholds must match the posterior dimension")
    for d in directions:
        if d not in ("greater", "less"):
            raise ValueError(f"direction must be 'greater' or 'less', got {d!r}")
    rng = np.random.default_rng(seed)
    draws = rng.multivariate_normal(post.mean, post.cov, size=samples)
    ok = np.ones(samples, dtype=bool)
    for j, d in enumerate(directions):
        if d == "greater":
            ok &= draws[:, j] > thresholds[j]
        else:
            ok &= draws[:, j] < thresholds[j]
    p = float(ok.mean())
    se = float(np.sqrt(p * (1.0 - p) / samples))
    return JointSuccess(
        probability=p,
        standard_error=se,
        samples=samples,
        seed=seed,
        directions=list(directions),
        thresholds=thresholds.tolist(),
    )
