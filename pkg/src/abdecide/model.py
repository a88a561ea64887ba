"""Domain types for experiment records and their validation.

An experiment is summarized by an estimated effect vector ``x`` over a set
of named metrics and a covariance matrix ``sigma`` for that estimate.
Validation treats data problems (asymmetry, indefiniteness, shape
mismatches) as reported violations rather than exceptions, so callers can
surface them to users.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

# Relative tolerances fixed by the data contract.
SYMMETRY_RTOL = 1e-10
# Minimum eigenvalue may be as low as -PSD_TOL * trace/n before the matrix
# is considered indefinite; absorbs bootstrap round-off.
PSD_TOL = 1e-10

ARMS = ("treatment", "control")
PROVENANCES = ("supplied", "bootstrapped")


class StorageError(RuntimeError):
    """Registry persistence failure (I/O, corrupt line)."""


class DuplicateIdError(ValueError):
    """Record id already present in the registry."""


@dataclass(frozen=True)
class MetricSchema:
    """Ordered metric names (and optional unit labels) shared by x and sigma."""

    names: tuple[str, ...]
    units: tuple[str, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        units = tuple(self.units) if self.units else ("",) * len(names)
        if len(names) < 1:
            raise ValueError("schema needs at least one metric")
        if any(not n for n in names):
            raise ValueError("metric names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError("metric names must be unique")
        if len(units) != len(names):
            raise ValueError("units must align with names")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "units", units)

    @property
    def n(self) -> int:
        return len(self.names)

    def matches(self, other: "MetricSchema") -> bool:
        """Exact match: same names in the same order. Units are labels only."""
        return self.names == other.names


@dataclass
class Gaussian:
    """A multivariate normal, used for priors, likelihoods, and posteriors."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=float).reshape(-1)
        self.cov = np.asarray(self.cov, dtype=float)
        if self.cov.shape != (self.mean.size, self.mean.size):
            raise ValueError(
                f"cov shape {self.cov.shape} does not match mean of length {self.mean.size}"
            )

    @property
    def dim(self) -> int:
        return self.mean.size


@dataclass
class ExperimentRecord:
    """One experiment's estimated treatment effects and their covariance."""

    id: str
    timestamp: float
    schema: MetricSchema
    x: np.ndarray
    sigma: np.ndarray
    treatment_label: str | None = None
    provenance: str = "supplied"

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float).reshape(-1)
        self.sigma = np.asarray(self.sigma, dtype=float)
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}")

    def sort_key(self):
        return (self.timestamp, self.id)

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "timestamp": self.timestamp,
            "metrics": [
                {"name": n, "unit": u}
                for n, u in zip(self.schema.names, self.schema.units)
            ],
            "x": self.x.tolist(),
            "sigma": self.sigma.tolist(),
            "treatment_label": self.treatment_label,
            "provenance": self.provenance,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> "ExperimentRecord":
        metrics = d["metrics"]
        if metrics and isinstance(metrics[0], str):
            schema = MetricSchema(names=tuple(metrics))
        else:
            schema = MetricSchema(
                names=tuple(m["name"] for m in metrics),
                units=tuple(m.get("unit", "") for m in metrics),
            )
        return cls(
            id=d["id"],
            timestamp=d["timestamp"],
            schema=schema,
            x=np.array(d["x"], dtype=float),
            sigma=np.array(d["sigma"], dtype=float),
            treatment_label=d.get("treatment_label"),
            provenance=d.get("provenance", "supplied"),
        )

    @classmethod
    def from_json_line(cls, line: str) -> "ExperimentRecord":
        return cls.from_json_dict(json.loads(line))


@dataclass
class UnitOutcomes:
    """Per-unit outcome vector with its arm assignment."""

    unit_id: str
    arm: str
    outcomes: np.ndarray

    def __post_init__(self):
        if self.arm not in ARMS:
            raise ValueError(f"arm must be one of {ARMS}, got {self.arm!r}")
        self.outcomes = np.asarray(self.outcomes, dtype=float).reshape(-1)
        if not np.all(np.isfinite(self.outcomes)):
            raise ValueError(f"unit {self.unit_id!r} has non-finite outcomes")


@dataclass
class ValidationResult:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def min_eigenvalue(matrix: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(matrix).min())


def is_symmetric(matrix: np.ndarray, rtol: float = SYMMETRY_RTOL) -> bool:
    scale = max(float(np.abs(matrix).max()), 1.0)
    return bool(np.all(np.abs(matrix - matrix.T) <= rtol * scale))


def validate_record(
    rec: ExperimentRecord, existing_ids: set[str] | None = None
) -> ValidationResult:
    """Check an ExperimentRecord against the data contract.

    Violations are data, not faults: the result lists them instead of
    raising. ``existing_ids``, when given, enables the duplicate-id check.
    """
    violations: list[str] = []
    n = rec.schema.n
    if rec.x.shape != (n,):
        violations.append(
            f"dimension mismatch: x has length {rec.x.size}, schema has {n} metrics"
        )
    if rec.sigma.shape != (n, n):
        violations.append(
            f"dimension mismatch: sigma has shape {rec.sigma.shape}, expected ({n}, {n})"
        )
    if not np.all(np.isfinite(rec.x)):
        violations.append("x has non-finite entries")
    if not np.all(np.isfinite(rec.sigma)):
        violations.append("sigma has non-finite entries")
    if rec.sigma.ndim == 2 and rec.sigma.shape[0] == rec.sigma.shape[1] and np.all(
        np.isfinite(rec.sigma)
    ):
        if not is_symmetric(rec.sigma):
            violations.append("sigma is not symmetric")
        else:
            lo = min_eigenvalue(rec.sigma)
            floor = -PSD_TOL * float(np.trace(rec.sigma)) / rec.sigma.shape[0]
            if lo < min(floor, 0.0):
                violations.append(
                    f"sigma is not PSD: min eigenvalue {lo:.6g} below tolerance"
                )
    if not math.isfinite(rec.timestamp):
        violations.append("timestamp is not finite")
    if not rec.id:
        violations.append("id is empty")
    if existing_ids is not None and rec.id in existing_ids:
        violations.append(f"duplicate id {rec.id!r}")
    return ValidationResult(ok=not violations, violations=violations)
