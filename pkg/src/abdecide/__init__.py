"""Bayesian decision engine for randomized experiments.

Pools evidence across historical experiments through a hierarchical
multivariate-normal prior, computes conjugate posteriors over treatment
effects, and recommends launch vs. roll-back by comparing expected risks
under stakeholder trade-offs and action costs.
"""

from .bootstrap import BootstrapConfig, bootstrap_sigma, estimate_effects
from .model import (
    ExperimentRecord,
    Gaussian,
    MetricSchema,
    UnitOutcomes,
    ValidationResult,
    validate_record,
)
from .posterior import (
    PosteriorSummary,
    joint_success_probability,
    posterior_update,
    summarize,
)
from .prior import FLAT, FlatPrior, HierParams, build_prior, empirical_theta, parse_k
from .registry import Registry, read_units_csv
from .risk import (
    DecisionReport,
    LossSpec,
    decision_space,
    expected_risks,
    g_transform,
    guardrail,
)
from .simulate import (
    HierSynthParams,
    SimConfig,
    SimReport,
    flip_report,
    hierarchical_synthetic,
    permutation_null,
    run_simulation,
)

__version__ = "0.1.0"

__all__ = [
    "BootstrapConfig",
    "DecisionReport",
    "ExperimentRecord",
    "FLAT",
    "FlatPrior",
    "Gaussian",
    "HierParams",
    "HierSynthParams",
    "LossSpec",
    "MetricSchema",
    "PosteriorSummary",
    "Registry",
    "SimConfig",
    "SimReport",
    "UnitOutcomes",
    "ValidationResult",
    "bootstrap_sigma",
    "build_prior",
    "decision_space",
    "empirical_theta",
    "estimate_effects",
    "expected_risks",
    "flip_report",
    "g_transform",
    "guardrail",
    "hierarchical_synthetic",
    "joint_success_probability",
    "parse_k",
    "permutation_null",
    "posterior_update",
    "read_units_csv",
    "run_simulation",
    "summarize",
    "validate_record",
]
