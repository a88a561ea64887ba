"""Hierarchical empirical-Bayes prior over a new experiment's effects.

All experiments' true effects are modeled as draws from a common normal
with unknown mean (flat hyperprior) and known between-experiment covariance
Gamma = k * Theta_hat, where Theta_hat is the empirical second-moment
matrix of historical effect estimates (no demeaning). Marginalizing the
common mean gives the new experiment's prior

    mean  m0    = H^-1 nu
    cov   Omega = Gamma + H^-1

with mean-precision nu = sum_i (Sigma_i + Gamma)^-1 x_i and precision
H = sum_i (Sigma_i + Gamma)^-1 over the history.

k tunes shrinkage: k=0 pools every experiment onto one shared effect,
k=inf ignores history entirely (the distinguished flat prior). Any
nonnegative real k is accepted for sweep diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import pd_inverse, pd_solve, symmetrize
from .model import ExperimentRecord, Gaussian

THETA_RIDGE = 1e-8


class FlatPrior:
    """Distinguished no-information prior: the posterior equals the likelihood."""

    def __repr__(self):
        return "FlatPrior()"

    def __eq__(self, other):
        return isinstance(other, FlatPrior)

    def __hash__(self):
        return hash(FlatPrior)


FLAT = FlatPrior()


def parse_k(token: str | float | int) -> float:
    """Shrinkage level from a CLI token or number; 'inf' means no pooling."""
    if isinstance(token, str):
        token = token.strip().lower()
        k = math.inf if token in ("inf", "infinity") else float(token)
    else:
        k = float(token)
    if math.isnan(k) or k < 0:
        raise ValueError(f"shrinkage level must be >= 0 or inf, got {token!r}")
    return k


def format_k(k: float) -> str:
    if math.isinf(k):
        return "inf"
    return f"{k:g}"


@dataclass
class HierParams:
    """Intermediate hyper-state behind a hierarchical prior."""

    theta_hat: np.ndarray
    gamma: np.ndarray
    nu: np.ndarray
    H: np.ndarray
    history_count: int


def empirical_theta(history: list[ExperimentRecord]) -> np.ndarray:
    """Across-experiment second moment (1/(t-1)) sum_i x_i x_i^T.

    The cross-experiment mean is assumed zero, so there is no demeaning.
    Near-singular results (inevitable while the history is shorter than
    the metric count) get a ridge of 1e-8 * mean-diagonal on the diagonal.
    """
    if not history:
        raise ValueError("empirical_theta needs a non-empty history")
    X = np.stack([rec.x for rec in history])
    theta = X.T @ X / len(history)
    theta = symmetrize(theta)
    n = theta.shape[0]
    scale = float(np.trace(theta)) / n
    if scale <= 0.0:
        scale = 1.0  # fully degenerate history (all effects zero)
    if float(np.linalg.eigvalsh(theta).min()) < THETA_RIDGE * scale:
        theta = theta + THETA_RIDGE * scale * np.eye(n)
    return theta


def build_hier_params(history: list[ExperimentRecord], k: float) -> HierParams:
    if not history or math.isinf(k):
        raise ValueError("hierarchical parameters need history and finite k")
    theta = empirical_theta(history)
    gamma = k * theta if k > 0 else np.zeros_like(theta)
    gamma = symmetrize(gamma)
    n = theta.shape[0]
    nu = np.zeros(n)
    H = np.zeros((n, n))
    for rec in history:
        marginal = rec.sigma + gamma
        solved = pd_solve(
            marginal, np.column_stack([rec.x, np.eye(n)]), what=f"Sigma+Gamma ({rec.id})"
        )
        nu += solved[:, 0]
        H += solved[:, 1:]
    return HierParams(
        theta_hat=theta, gamma=gamma, nu=nu, H=symmetrize(H), history_count=len(history)
    )


def build_prior(history: list[ExperimentRecord], k: float) -> Gaussian | FlatPrior:
    """Prior for the next experiment's effects given schema-matched history.

    Empty history or k=inf short-circuits to the flat prior; no matrix
    algebra runs in that case.
    """
    if math.isnan(k) or k < 0:
        raise ValueError(f"shrinkage level must be >= 0 or inf, got {k!r}")
    if not history or math.isinf(k):
        return FLAT
    params = build_hier_params(history, k)
    m0 = pd_solve(params.H, params.nu, what="prior precision")
    omega = symmetrize(params.gamma + pd_inverse(params.H, what="prior precision"))
    return Gaussian(mean=m0, cov=omega)


def sd_correlation_view(gaussian: Gaussian) -> np.ndarray:
    """Report matrix: standard deviations on the diagonal, correlations off it."""
    sd = np.sqrt(np.clip(np.diag(gaussian.cov), 0.0, None))
    view = np.zeros_like(gaussian.cov)
    n = gaussian.dim
    for i in range(n):
        view[i, i] = sd[i]
        for j in range(n):
            if i != j:
                denom = sd[i] * sd[j]
                view[i, j] = gaussian.cov[i, j] / denom if denom > 0 else 0.0
    return view
