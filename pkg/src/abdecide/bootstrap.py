"""Effect and covariance estimation from unit-level outcomes.

The effect estimator is the per-metric difference in arm means. Its
sampling covariance is estimated by a stratified nonparametric bootstrap:
units are resampled with replacement within each arm (arm sizes fixed by
the design), the estimator is recomputed per replicate, and the empirical
covariance of the replicate vectors is returned.

Replicate ``r`` draws from a child RNG stream keyed on ``(seed, r)``, so
growing the replicate count extends the replicate matrix without
reshuffling earlier rows, and replicates can be computed in any order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import UnitOutcomes

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class BootstrapConfig:
    replicates: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.replicates < 2:
            raise ValueError("bootstrap needs at least 2 replicates")


def _split_arms(data: list[UnitOutcomes]) -> tuple[np.ndarray, np.ndarray]:
    treat = [u.outcomes for u in data if u.arm == "treatment"]
    control = [u.outcomes for u in data if u.arm == "control"]
    if not treat or not control:
        raise ValueError("need at least one unit in each arm")
    t = np.vstack(treat)
    c = np.vstack(control)
    if t.shape[1] != c.shape[1]:
        raise ValueError("inconsistent outcome dimensions across arms")
    return t, c


def estimate_effects(data: list[UnitOutcomes]) -> np.ndarray:
    """Difference in means per metric: mean(treatment) - mean(control)."""
    t, c = _split_arms(data)
    return t.mean(axis=0) - c.mean(axis=0)


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    return np.random.default_rng([seed & _U64, replicate])


def bootstrap_replicates(data: list[UnitOutcomes], cfg: BootstrapConfig) -> np.ndarray:
    """(B, n) matrix of within-arm resampled effect estimates."""
    t, c = _split_arms(data)
    if t.shape[0] < 2 or c.shape[0] < 2:
        raise ValueError("bootstrap needs at least 2 units per arm")
    out = np.empty((cfg.replicates, t.shape[1]))
    for r in range(cfg.replicates):
        rng = replicate_rng(cfg.seed, r)
        ti = rng.integers(0, t.shape[0], size=t.shape[0])
        ci = rng.integers(0, c.shape[0], size=c.shape[0])
        out[r] = t[ti].mean(axis=0) - c[ci].mean(axis=0)
    return out


def bootstrap_sigma(data: list[UnitOutcomes], cfg: BootstrapConfig) -> np.ndarray:
    """Empirical covariance (denominator B-1) of the bootstrap replicates."""
    reps = bootstrap_replicates(data, cfg)
    centered = reps - reps.mean(axis=0)
    sigma = centered.T @ centered / (cfg.replicates - 1)
    return (sigma + sigma.T) / 2.0


def two_sample_variance(data: list[UnitOutcomes]) -> np.ndarray:
    """Analytic per-metric variance s_T^2/n_T + s_C^2/n_C (oracle for tests)."""
    t, c = _split_arms(data)
    return t.var(axis=0, ddof=1) / t.shape[0] + c.var(axis=0, ddof=1) / c.shape[0]
