"""Command-line entry point.

Subcommands: ingest, prior, posterior, decide, space, simulate, flips,
serve. Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 validation/data error, 2 usage error. Report subcommands can write CSV
tables plus rendered figures into an output directory.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .bootstrap import BootstrapConfig, bootstrap_sigma, estimate_effects
from .model import DuplicateIdError, ExperimentRecord, Gaussian, MetricSchema, StorageError
from .posterior import DEFAULT_CREDIBLE_LEVEL, posterior_update, summarize
from .prior import FLAT, FlatPrior, build_prior, format_k, parse_k, sd_correlation_view
from .registry import Registry, read_units_csv
from .risk import LossSpec, decision_space, expected_risks
from .serialize import canonical_json_bytes, csv_text, grid_rows, render_table
from .simulate import FLIP_HEADER, SimConfig, flip_report, run_simulation

DEFAULT_REGISTRY = "registry.jsonl"
REGISTRY_ENV = "ABDECIDE_REGISTRY"


def log(msg: str):
    print(msg, file=sys.stderr)


def emit_bytes(data: bytes):
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


def _credible_level(value: str) -> float:
    level = float(value)
    if not 0.0 < level < 1.0:
        raise argparse.ArgumentTypeError("credible level must be in (0, 1)")
    return level


def _k_value(value: str) -> float:
    try:
        return parse_k(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _axis(value: str):
    name, _, rest = value.partition(":")
    if not name or not rest:
        raise argparse.ArgumentTypeError("expected <metric>:<v1,v2,...>")
    try:
        values = [float(v) for v in rest.split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid values in {value!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("axis needs at least one value")
    return name, values


def _fixed(value: str):
    name, sep, raw = value.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError("expected <metric>=<value>")
    try:
        return name, float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad value in {value!r}") from None


def _floats(value: str) -> list[float]:
    try:
        return [float(v) for v in value.split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abdecide",
        description="Bayesian launch/roll-back decisions for randomized experiments",
    )
    parser.add_argument(
        "--registry",
        default=os.environ.get(REGISTRY_ENV, DEFAULT_REGISTRY),
        help=f"registry JSONL path (env {REGISTRY_ENV})",
    )
    parser.add_argument(
        "--credible-level",
        type=_credible_level,
        default=DEFAULT_CREDIBLE_LEVEL,
        help="central credible interval level (default 0.95)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="append an experiment to the registry")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--units", help="unit-level CSV (unit_id,arm,<metrics...>)")
    src.add_argument("--record", help="ExperimentRecord JSON file")
    p.add_argument("--id", help="experiment id (required with --units)")
    p.add_argument("--timestamp", type=float, help="epoch seconds (required with --units)")
    p.add_argument("--treatment-label", default=None)
    p.add_argument("--bootstrap-replicates", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("prior", help="hierarchical prior from historical experiments")
    p.add_argument("--before", type=float, default=math.inf, help="history cutoff timestamp")
    p.add_argument("--k", type=_k_value, default=1.0, help="shrinkage level (0|1|inf|float)")
    p.add_argument("--metrics", help="comma-separated metric names (default: latest record's)")
    p.add_argument("--sweep", type=_floats, help="extra k values to sweep for the report")
    p.add_argument("--out-dir", help="write sweep CSV and figure here")
    p.add_argument("--output-format", choices=("json", "table"), default="json")
    p.set_defaults(handler=cmd_prior)

    p = sub.add_parser("posterior", help="posterior for one experiment")
    p.add_argument("--experiment", required=True)
    p.add_argument("--k", type=_k_value, default=1.0)
    p.add_argument("--compare-k", type=str, help="comma-separated k values for side-by-side")
    p.add_argument("--output-format", choices=("json", "table", "csv"), default="json")
    p.set_defaults(handler=cmd_posterior)

    p = sub.add_parser("decide", help="launch/roll-back recommendation")
    p.add_argument("--experiment", required=True)
    p.add_argument("--k", type=_k_value, default=1.0)
    p.add_argument("--tradeoffs", type=_floats, required=True)
    p.add_argument("--c0", type=float, default=0.0, help="roll-back cost")
    p.add_argument("--c1", type=float, default=0.0, help="launch cost")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mc-samples", type=int, default=10000)
    p.set_defaults(handler=cmd_decide)

    p = sub.add_parser("space", help="decision-space grid over two trade-off axes")
    p.add_argument("--experiment", required=True)
    p.add_argument("--k", type=_k_value, default=1.0)
    p.add_argument("--axis1", type=_axis, required=True, metavar="METRIC:V1,V2,...")
    p.add_argument("--axis2", type=_axis, required=True, metavar="METRIC:V1,V2,...")
    p.add_argument("--fixed", type=_fixed, action="append", default=[], metavar="METRIC=V")
    p.add_argument("--c0", type=float, default=0.0)
    p.add_argument("--c1", type=float, default=0.0)
    p.add_argument("--out-dir", help="write decision_space.csv and .png here")
    p.set_defaults(handler=cmd_space)

    p = sub.add_parser("simulate", help="k-sweep MSE/coverage study")
    p.add_argument("--config", required=True, help="JSON simulation config")
    p.add_argument("--out-dir", help="write CSV tables and figure here")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("flips", help="significance flips between two k values")
    p.add_argument("--ka", type=_k_value, required=True)
    p.add_argument("--kb", type=_k_value, required=True)
    p.add_argument("--out-dir", help="write flips.csv here")
    p.set_defaults(handler=cmd_flips)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--cors-origin", action="append", default=None)
    p.set_defaults(handler=cmd_serve)

    return parser


def _schema_for(registry: Registry, args) -> MetricSchema | None:
    if args.metrics:
        return MetricSchema(names=tuple(s.strip() for s in args.metrics.split(",")))
    candidates = [r for r in registry.snapshot() if r.timestamp < args.before]
    return candidates[-1].schema if candidates else None


def cmd_ingest(args, registry: Registry) -> int:
    if args.units:
        if args.id is None or args.timestamp is None:
            log("error: --units requires --id and --timestamp")
            return 2
        schema, units = read_units_csv(args.units)
        cfg = BootstrapConfig(replicates=args.bootstrap_replicates, seed=args.seed)
        rec = ExperimentRecord(
            id=args.id,
            timestamp=args.timestamp,
            schema=schema,
            x=estimate_effects(units),
            sigma=bootstrap_sigma(units, cfg),
            treatment_label=args.treatment_label,
            provenance="bootstrapped",
        )
        ack = {
            "id": rec.id,
            "timestamp": rec.timestamp,
            "metrics": list(schema.names),
            "seed": args.seed,
            "bootstrap_replicates": args.bootstrap_replicates,
        }
    else:
        rec = ExperimentRecord.from_json_dict(json.loads(Path(args.record).read_text()))
        ack = {"id": rec.id, "timestamp": rec.timestamp, "metrics": list(rec.schema.names)}
    registry.append(rec)
    log(f"ingested {rec.id} into {registry.path}")
    emit_bytes(canonical_json_bytes(ack))
    return 0


def _prior_dict(prior: Gaussian | FlatPrior, k: float, history_count: int, schema):
    d = {"k": format_k(k), "history_count": history_count}
    if schema is not None:
        d["metrics"] = list(schema.names)
    if isinstance(prior, FlatPrior):
        d["flat"] = True
        return d
    d["flat"] = False
    d["mean"] = prior.mean.tolist()
    d["cov"] = prior.cov.tolist()
    d["sd_correlation"] = sd_correlation_view(prior).tolist()
    return d


def cmd_prior(args, registry: Registry) -> int:
    schema = _schema_for(registry, args)
    history = registry.history(args.before, schema) if schema is not None else []
    prior = build_prior(history, args.k)
    out = _prior_dict(prior, args.k, len(history), schema)
    if isinstance(prior, FlatPrior):
        log("flat prior: no usable history (or k=inf); posterior will equal the likelihood")
    if args.sweep:
        ks = sorted(set(args.sweep) | {args.k})
        sweep_rows: list[list] = [["k"]]
        means, sds = [], []
        for name in schema.names if schema else []:
            sweep_rows[0] += [f"mean_{name}", f"sd_{name}"]
        finite_ks = [k for k in ks if not math.isinf(k)]
        for k in finite_ks:
            g = build_prior(history, k)
            if isinstance(g, FlatPrior):
                continue
            mean = g.mean
            sd = np.sqrt(np.clip(np.diag(g.cov), 0.0, None))
            means.append(mean)
            sds.append(sd)
            row: list = [float(k)]
            for j in range(len(mean)):
                row += [float(mean[j]), float(sd[j])]
            sweep_rows.append(row)
        out["sweep"] = {"k": [float(k) for k in finite_ks]}
        if args.out_dir and len(sweep_rows) > 1:
            out_dir = Path(args.out_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / "prior_sweep.csv").write_text(csv_text(sweep_rows))
            from .figures import prior_sweep_figure

            prior_sweep_figure(
                finite_ks, np.array(means), np.array(sds), schema.names,
                out_dir / "prior_sweep.png",
            )
            log(f"wrote {out_dir / 'prior_sweep.csv'} and prior_sweep.png")
    if args.output_format == "table" and not isinstance(prior, FlatPrior):
        rows: list[list] = [["metric", "prior_mean"]]
        for j, name in enumerate(schema.names):
            rows.append([name, prior.mean[j]])
        view = sd_correlation_view(prior)
        mat_rows: list[list] = [["(sd diag / corr off)", *schema.names]]
        for i, name in enumerate(schema.names):
            mat_rows.append([name, *view[i].tolist()])
        sys.stdout.write(render_table(rows) + "\n" + render_table(mat_rows))
    else:
        emit_bytes(canonical_json_bytes(out))
    return 0


def _posterior_summary_for(registry: Registry, experiment_id: str, k: float, level: float):
    rec = registry.get(experiment_id)
    if rec is None:
        raise KeyError(f"unknown experiment id {experiment_id!r}")
    history = registry.history_for(rec)
    post = posterior_update(build_prior(history, k), rec.x, rec.sigma)
    return rec, summarize(post, k, level=level)


def cmd_posterior(args, registry: Registry) -> int:
    if args.compare_k:
        ks = [parse_k(tok) for tok in args.compare_k.split(",")]
        rec = registry.get(args.experiment)
        if rec is None:
            raise KeyError(f"unknown experiment id {args.experiment!r}")
        rows: list[list] = [["metric"]]
        for k in ks:
            label = format_k(k)
            rows[0] += [f"est_k={label}", f"cil_k={label}", f"cir_k={label}"]
        summaries = [
            _posterior_summary_for(registry, args.experiment, k, args.credible_level)[1]
            for k in ks
        ]
        for j, name in enumerate(rec.schema.names):
            row: list = [name]
            for s in summaries:
                row += [s.gaussian.mean[j], s.intervals[j, 0], s.intervals[j, 1]]
            rows.append(row)
        if args.output_format == "csv":
            sys.stdout.write(csv_text(rows))
        else:
            sys.stdout.write(render_table(rows))
        return 0
    rec, summary = _posterior_summary_for(
        registry, args.experiment, args.k, args.credible_level
    )
    emit_bytes(
        canonical_json_bytes(
            summary.to_json_dict(metrics=rec.schema.names, experiment_id=rec.id)
        )
    )
    return 0


def cmd_decide(args, registry: Registry) -> int:
    rec = registry.get(args.experiment)
    if rec is None:
        raise KeyError(f"unknown experiment id {args.experiment!r}")
    history = registry.history_for(rec)
    post = posterior_update(build_prior(history, args.k), rec.x, rec.sigma)
    loss = LossSpec(tradeoffs=args.tradeoffs, c0=args.c0, c1=args.c1)
    report = expected_risks(
        post,
        loss,
        mc_samples=args.mc_samples,
        seed=args.seed,
        k=args.k,
        credible_level=args.credible_level,
    )
    emit_bytes(
        canonical_json_bytes(
            report.to_json_dict(
                metrics=rec.schema.names, experiment_id=rec.id, tradeoffs=args.tradeoffs
            )
        )
    )
    return 0


def cmd_space(args, registry: Registry) -> int:
    rec = registry.get(args.experiment)
    if rec is None:
        raise KeyError(f"unknown experiment id {args.experiment!r}")
    names = list(rec.schema.names)
    (m1, values1), (m2, values2) = args.axis1, args.axis2
    for name in (m1, m2, *[n for n, _ in args.fixed]):
        if name not in names:
            raise KeyError(f"unknown metric {name!r}; experiment has {names}")
    if m1 == m2:
        log("error: the two axes must be distinct metrics")
        return 2
    fixed = np.zeros(len(names))
    for name, value in args.fixed:
        fixed[names.index(name)] = value
    history = registry.history_for(rec)
    post = posterior_update(build_prior(history, args.k), rec.x, rec.sigma)
    points = decision_space(
        post,
        axes=(names.index(m1), names.index(m2)),
        grids=(values1, values2),
        fixed=fixed,
        c0=args.c0,
        c1=args.c1,
    )
    rows = grid_rows(points)
    sys.stdout.write(csv_text(rows))
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "decision_space.csv").write_text(csv_text(rows))
        from .figures import decision_space_heatmap

        decision_space_heatmap(
            points, m1, m2, out_dir / "decision_space.png",
            title=f"{rec.id}: decision space (k={format_k(args.k)})",
        )
        log(f"wrote {out_dir / 'decision_space.csv'} and decision_space.png")
    return 0


def cmd_simulate(args, registry: Registry) -> int:
    raw = json.loads(Path(args.config).read_text())
    unit_files = raw.pop("unit_files", None)
    cfg = SimConfig.from_dict(raw)
    unit_data = None
    schema = None
    if unit_files:
        unit_data = []
        for path in unit_files:
            file_schema, units = read_units_csv(path)
            if schema is None:
                schema = file_schema
            elif not schema.matches(file_schema):
                raise ValueError(f"{path}: metric schema differs from earlier files")
            unit_data.append(units)
    report = run_simulation(cfg, unit_data=unit_data, schema=schema)
    emit_bytes(canonical_json_bytes(report.to_json_dict()))
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for which in ("mse", "coverage", "interval_width"):
            (out_dir / f"{which}.csv").write_text(csv_text(report.table_rows(which)))
        from .figures import simulation_figure

        simulation_figure(report, out_dir / "simulation.png")
        log(f"wrote CSV tables and simulation.png to {out_dir}")
    return 0


def cmd_flips(args, registry: Registry) -> int:
    flips = flip_report(
        registry.snapshot(), args.ka, args.kb, credible_level=args.credible_level
    )
    rows: list[list] = [list(FLIP_HEADER)]
    for f in flips:
        rows.append(f.to_row())
    sys.stdout.write(csv_text(rows))
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "flips.csv").write_text(csv_text(rows))
        log(f"wrote {out_dir / 'flips.csv'}")
    return 0


def cmd_serve(args, registry: Registry) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(registry, cors_origins=args.cors_origin)
    log(f"serving registry {registry.path} on {args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        registry = Registry(args.registry)
        return args.handler(args, registry)
    except (ValueError, KeyError, DuplicateIdError, StorageError, OSError) as exc:
        msg = exc.args[0] if exc.args else exc
        log(f"error: {msg}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
