"""HTTP service over the registry: posteriors, decisions, decision spaces.

Handlers are stateless and compute on registry snapshots; writes serialize
through the registry's single-writer lock. Computation endpoints reuse the
CLI's canonical JSON encoding, so responses match CLI output byte for
byte on identical inputs.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .model import DuplicateIdError, ExperimentRecord, validate_record
from .posterior import DEFAULT_CREDIBLE_LEVEL, posterior_update, summarize
from .prior import build_prior, parse_k
from .registry import Registry
from .risk import LossSpec, decision_space, expected_risks
from .serialize import canonical_json_bytes

MAX_GRID_POINTS = 250_000


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class AxisSpec(BaseModel):
    metric: str
    values: list[float] = Field(min_length=1)


class DecideRequest(BaseModel):
    experiment_id: str
    k: float | str = "1"
    tradeoffs: list[float]
    c0: float = 0.0
    c1: float = 0.0
    seed: int = 0
    mc_samples: int = 10000
    credible_level: float = DEFAULT_CREDIBLE_LEVEL


class DecisionSpaceRequest(BaseModel):
    experiment_id: str
    k: float | str = "1"
    axis1: AxisSpec
    axis2: AxisSpec
    fixed: dict[str, float] = Field(default_factory=dict)
    c0: float = 0.0
    c1: float = 0.0
    credible_level: float = DEFAULT_CREDIBLE_LEVEL


def _parse_k_or_400(raw) -> float:
    try:
        return parse_k(raw)
    except ValueError as exc:
        raise ApiError(400, "bad_k", str(exc)) from None


def create_app(registry: Registry, cors_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="abdecide", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"status": exc.status, "code": exc.code, "message": exc.message},
        )

    def get_record(experiment_id: str) -> ExperimentRecord:
        rec = registry.get(experiment_id)
        if rec is None:
            raise ApiError(404, "unknown_experiment", f"no experiment {experiment_id!r}")
        return rec

    def posterior_for(rec: ExperimentRecord, k: float):
        history = registry.history_for(rec)
        return posterior_update(build_prior(history, k), rec.x, rec.sigma)

    @app.get("/health")
    def health():
        return {"ok": True, "experiments": len(registry)}

    @app.get("/experiments")
    def list_experiments():
        return [
            {
                "id": r.id,
                "timestamp": r.timestamp,
                "metrics": list(r.schema.names),
                "treatment_label": r.treatment_label,
                "provenance": r.provenance,
            }
            for r in registry.snapshot()
        ]

    @app.post("/experiments", status_code=201)
    def add_experiment(body: dict):
        try:
            rec = ExperimentRecord.from_json_dict(body)
        except (KeyError, ValueError, TypeError) as exc:
            raise ApiError(422, "invalid_record", f"cannot parse record: {exc}") from None
        result = validate_record(rec, existing_ids=registry.ids())
        if any("duplicate id" in v for v in result.violations):
            raise ApiError(409, "duplicate_id", f"experiment {rec.id!r} already exists")
        if not result.ok:
            raise ApiError(422, "invalid_record", "; ".join(result.violations))
        try:
            registry.append(rec)
        except DuplicateIdError as exc:
            raise ApiError(409, "duplicate_id", str(exc)) from None
        return {"id": rec.id}

    @app.get("/experiments/{experiment_id}/posterior")
    def get_posterior(
        experiment_id: str, k: str = "1", credible_level: float = DEFAULT_CREDIBLE_LEVEL
    ):
        rec = get_record(experiment_id)
        k_value = _parse_k_or_400(k)
        if not 0.0 < credible_level < 1.0:
            raise ApiError(400, "bad_level", "credible_level must be in (0, 1)")
        summary = summarize(
            posterior_for(rec, k_value), k_value, level=credible_level
        )
        return Response(
            content=canonical_json_bytes(
                summary.to_json_dict(metrics=rec.schema.names, experiment_id=rec.id)
            ),
            media_type="application/json",
        )

    @app.post("/decide")
    def post_decide(body: DecideRequest):
        rec = get_record(body.experiment_id)
        k_value = _parse_k_or_400(body.k)
        try:
            loss = LossSpec(tradeoffs=body.tradeoffs, c0=body.c0, c1=body.c1)
            report = expected_risks(
                posterior_for(rec, k_value),
                loss,
                mc_samples=body.mc_samples,
                seed=body.seed,
                k=k_value,
                credible_level=body.credible_level,
            )
        except ValueError as exc:
            raise ApiError(422, "invalid_request", str(exc)) from None
        return Response(
            content=canonical_json_bytes(
                report.to_json_dict(
                    metrics=rec.schema.names,
                    experiment_id=rec.id,
                    tradeoffs=body.tradeoffs,
                )
            ),
            media_type="application/json",
        )

    @app.post("/decision-space")
    def post_decision_space(body: DecisionSpaceRequest):
        rec = get_record(body.experiment_id)
        k_value = _parse_k_or_400(body.k)
        names = list(rec.schema.names)
        for name in (body.axis1.metric, body.axis2.metric, *body.fixed):
            if name not in names:
                raise ApiError(422, "unknown_metric", f"no metric {name!r} in {names}")
        if body.axis1.metric == body.axis2.metric:
            raise ApiError(422, "invalid_axes", "axes must be distinct metrics")
        n_points = len(body.axis1.values) * len(body.axis2.values)
        if n_points > MAX_GRID_POINTS:
            raise ApiError(
                413, "grid_too_large", f"{n_points} points exceeds {MAX_GRID_POINTS}"
            )
        fixed = [0.0] * len(names)
        for name, value in body.fixed.items():
            fixed[names.index(name)] = value
        post = posterior_for(rec, k_value)
        points = decision_space(
            post,
            axes=(names.index(body.axis1.metric), names.index(body.axis2.metric)),
            grids=(body.axis1.values, body.axis2.values),
            fixed=fixed,
            c0=body.c0,
            c1=body.c1,
        )
        summary = summarize(post, k_value, level=body.credible_level)
        return {
            "posterior": summary.to_json_dict(metrics=names, experiment_id=rec.id),
            "axis1": body.axis1.metric,
            "axis2": body.axis2.metric,
            "c0": body.c0,
            "c1": body.c1,
            "grid": [
                {
                    "lambda1": p.lambda1,
                    "lambda2": p.lambda2,
                    "risk_launch": None if math.isnan(p.risk_launch) else p.risk_launch,
                    "decision": p.decision,
                }
                for p in points
            ],
        }

    return app
