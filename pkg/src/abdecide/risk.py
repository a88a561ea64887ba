"""Expected-risk decision engine: launch vs roll-back under a loss spec.

Trade-offs enter through a reciprocal normalization: entry i of the
trade-off vector says how many units of metric i equal one reference unit,
so its per-unit value weight is proportional to 1/lambda_i, normalized so
the absolute weights sum to one. Weights are computed in exact rational
arithmetic with a single rounding per entry, which makes them invariant
under any rescaling of the trade-off vector whose products are exactly
representable.

For the linear loss the expected risks are affine in the posterior mean:

    risk(launch)    = -g^T tau + c1
    risk(roll-back) = +g^T tau + c0

so the posterior covariance does not move linear risks; it still drives
custom-loss risks and joint success probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from .model import Gaussian
from .posterior import (
    DEFAULT_CREDIBLE_LEVEL,
    JointSuccess,
    PosteriorSummary,
    joint_success_probability,
    summarize,
)

ACTIONS = ("launch", "rollback")


def g_transform(tradeoffs) -> np.ndarray:
    """Reciprocal-normalized value weights: (1/l_i) / sum_j (1/|l_j|).

    Zero entries mean "metric excluded": they map to weight 0 and do not
    enter the normalizer. The nonzero weights always satisfy
    sum_i |out_i| = 1.
    """
    lam = np.asarray(tradeoffs, dtype=float).reshape(-1)
    if lam.size == 0:
        raise ValueError("trade-off vector is empty")
    if not np.all(np.isfinite(lam)):
        raise ValueError("trade-off vector has non-finite entries")
    if not np.any(lam != 0.0):
        raise ValueError("trade-off vector is all zero")
    recip = [Fraction(1) / Fraction(v) if v != 0.0 else None for v in lam.tolist()]
    denom = sum(abs(r) for r in recip if r is not None)
    out = np.zeros(lam.size)
    for i, r in enumerate(recip):
        if r is not None:
            out[i] = float(r / denom)
    return out


@dataclass
class LossSpec:
    """Trade-offs, action costs, and the loss form.

    ``loss_fn`` switches the engine to Monte Carlo: it must map
    (action, effects) with effects of shape (draws, n) to a (draws,)
    array of losses. The linear form needs no sampling.
    """

    tradeoffs: np.ndarray
    c0: float = 0.0
    c1: float = 0.0
    loss_fn: Callable[[str, np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        self.tradeoffs = np.asarray(self.tradeoffs, dtype=float).reshape(-1)
        if not np.any(self.tradeoffs != 0.0):
            raise ValueError("at least one trade-off entry must be nonzero")
        if not (math.isfinite(self.c0) and math.isfinite(self.c1)):
            raise ValueError("costs must be finite")

    @property
    def form(self) -> str:
        return "linear" if self.loss_fn is None else "custom"


@dataclass
class DecisionReport:
    risk_launch: float
    risk_rollback: float
    recommendation: str
    weights: np.ndarray
    posterior: PosteriorSummary
    joint_success: JointSuccess | None = None
    mc_standard_errors: dict | None = None
    seed: int = 0
    loss_form: str = "linear"

    def to_json_dict(self, metrics=None, experiment_id=None, tradeoffs=None) -> dict:
        d: dict = {}
        if experiment_id is not None:
            d["experiment_id"] = experiment_id
        d["loss_form"] = self.loss_form
        d["seed"] = self.seed
        if tradeoffs is not None:
            d["tradeoffs"] = list(np.asarray(tradeoffs, dtype=float))
        d["weights"] = self.weights.tolist()
        d["risk_launch"] = self.risk_launch
        d["risk_rollback"] = self.risk_rollback
        d["recommendation"] = self.recommendation
        if self.mc_standard_errors is not None:
            d["mc_standard_errors"] = self.mc_standard_errors
        if self.joint_success is not None:
            d["joint_success"] = self.joint_success.to_json_dict()
        d["posterior"] = self.posterior.to_json_dict(
            metrics=metrics, experiment_id=experiment_id
        )
        return d


def _recommend(risk_launch: float, risk_rollback: float) -> str:
    # Tie goes to roll-back: keeping the status quo carries no change risk.
    return "launch" if risk_launch < risk_rollback else "rollback"


def _joint_success_for(
    post: Gaussian, tradeoffs: np.ndarray, samples: int, seed: int
) -> JointSuccess | None:
    """Joint success over the metrics in play: above 0 where value is positive,
    below 0 where the trade-off marks the metric as a cost."""
    idx = np.flatnonzero(tradeoffs != 0.0)
    if idx.size == 0:
        return None
    sub = Gaussian(mean=post.mean[idx], cov=post.cov[np.ix_(idx, idx)])
    directions = ["greater" if tradeoffs[i] > 0 else "less" for i in idx]
    return joint_success_probability(
        sub, directions, np.zeros(idx.size), samples=samples, seed=seed
    )


def expected_risks(
    post: Gaussian,
    loss: LossSpec,
    mc_samples: int = 10000,
    seed: int = 0,
    k: float = math.inf,
    credible_level: float = DEFAULT_CREDIBLE_LEVEL,
    include_joint_success: bool = True,
) -> DecisionReport:
    """Per-action expected risks plus a recommendation.

    Linear losses use the closed-form affine risks; custom losses average
    the callback over ``mc_samples`` posterior draws and report Monte
    Carlo standard errors alongside.
    """
    weights = g_transform(loss.tradeoffs)
    if weights.size != post.dim:
        raise ValueError(
            f"trade-off vector of length {weights.size} does not match "
            f"posterior dimension {post.dim}"
        )
    mc_se = None
    if loss.loss_fn is None:
        signal = float(weights @ post.mean)
        risk_launch = -signal + loss.c1
        risk_rollback = signal + loss.c0
    else:
        rng = np.random.default_rng(seed)
        draws = rng.multivariate_normal(post.mean, post.cov, size=mc_samples)
        per_action = {}
        mc_se = {}
        for action in ACTIONS:
            losses = np.asarray(loss.loss_fn(action, draws), dtype=float)
            if losses.shape != (mc_samples,):
                raise ValueError(
                    "custom loss must return one value per draw "
                    f"(got shape {losses.shape})"
                )
            if not np.all(np.isfinite(losses)):
                raise ValueError(f"custom loss produced non-finite values ({action})")
            per_action[action] = float(losses.mean())
            mc_se[action] = float(losses.std(ddof=1) / math.sqrt(mc_samples))
        risk_launch = per_action["launch"]
        risk_rollback = per_action["rollback"]
    joint = (
        _joint_success_for(post, loss.tradeoffs, samples=max(mc_samples, 1000), seed=seed)
        if include_joint_success
        else None
    )
    return DecisionReport(
        risk_launch=risk_launch,
        risk_rollback=risk_rollback,
        recommendation=_recommend(risk_launch, risk_rollback),
        weights=weights,
        posterior=summarize(post, k, level=credible_level),
        joint_success=joint,
        mc_standard_errors=mc_se,
        seed=seed,
        loss_form=loss.form,
    )


@dataclass
class GridPoint:
    lambda1: float
    lambda2: float
    risk_launch: float
    decision: str  # launch | rollback | skipped


def decision_space(
    post: Gaussian,
    axes: tuple[int, int],
    grids: tuple,
    fixed: np.ndarray,
    c0: float = 0.0,
    c1: float = 0.0,
) -> list[GridPoint]:
    """Dense launch/roll-back grid over two trade-off axes.

    ``fixed`` is the full-length trade-off vector whose axis entries are
    overwritten per grid point. Points are emitted row-major (axis 1 outer,
    axis 2 inner). With equal costs the classification follows the sign of
    the launch risk; otherwise the two risks are compared directly.
    All-zero trade-off points are skipped and flagged.
    """
    i, j = axes
    if i == j:
        raise ValueError("decision-space axes must be distinct metrics")
    fixed = np.asarray(fixed, dtype=float).reshape(-1)
    if fixed.size != post.dim:
        raise ValueError("fixed trade-off vector must match the posterior dimension")
    values1, values2 = grids
    if len(values1) == 0 or len(values2) == 0:
        raise ValueError("decision-space grids must be non-empty")
    equal_costs = c0 == c1
    points = []
    for v1 in values1:
        for v2 in values2:
            lam = fixed.copy()
            lam[i] = v1
            lam[j] = v2
            if not np.any(lam != 0.0):
                points.append(GridPoint(float(v1), float(v2), math.nan, "skipped"))
                continue
            signal = float(g_transform(lam) @ post.mean)
            risk_launch = -signal + c1
            risk_rollback = signal + c0
            if equal_costs:
                decision = "launch" if risk_launch < 0.0 else "rollback"
            else:
                decision = _recommend(risk_launch, risk_rollback)
            points.append(GridPoint(float(v1), float(v2), risk_launch, decision))
    return points


def guardrail(loss: LossSpec, metric: int, inflation: float) -> LossSpec:
    """Inflate one metric's value: its trade-off entry shrinks by the factor,
    so its share of the normalized weights grows."""
    if not inflation > 0:
        raise ValueError("guardrail inflation must be > 0")
    lam = loss.tradeoffs.copy()
    if lam[metric] == 0.0:
        raise ValueError("cannot guardrail an excluded (zero trade-off) metric")
    lam[metric] = lam[metric] / inflation
    return replace(loss, tradeoffs=lam)
