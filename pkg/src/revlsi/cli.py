"""Command-line front end.

Subcommands: ``check``, ``suite``, ``saturate``, ``semigroup``, ``clt``,
``constant`` and ``alpha``.  Exit status is 0 when every reported inequality
holds, 1 on a violation and 2 on a usage or input error.

JSON reports carry the resolved configuration under ``"config"`` and all
run-dependent data (timestamp, version, worker count) under ``"metadata"``;
everything outside ``"metadata"`` is a pure function of the configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from .density import NAMED_FUNCTIONS, Density, describe, from_json, named_function
from .discrete import bernoulli_optimal_constant, clt_pipeline, scan_optimal_constant, CLT_HEADER
from .errors import LabError
from .functionals import DEFAULT_NODES, covariance, shannon_entropy
from .inequalities import (
    DENSITY_CHECKERS,
    InequalityReport,
    check_covariance_amgm,
    check_lsi_gross,
    check_reversed_lsi,
    exp_witness,
    make_report,
)
from .isoperimetry import check_bobkov, density_profile_function
from .semigroup import DEFAULT_SLICES, interpolation_identity
from .transforms import equivalence_roundtrip, gauss_to_euclid_function, optimal_alpha, scale_family

OUT_DIR_ENV = "REVLSI_OUT_DIR"
EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    """Bad command-line input; reported with exit status 2."""


@dataclass
class RunConfig:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    tol: float | None = None
    nodes: int = DEFAULT_NODES
    grid: int | None = None
    seed: int | None = None
    format: str = "json"
    out: str | None = None


# ---------------------------------------------------------------------------
# checkers applied to a single density
# ---------------------------------------------------------------------------


def _lsi(g, cfg):
    return check_lsi_gross(gauss_to_euclid_function(g), nodes=cfg.nodes, grid=cfg.grid, tol=cfg.tol)


def _reversed_lsi(g, cfg):
    return check_reversed_lsi(gauss_to_euclid_function(g), nodes=cfg.nodes, grid=cfg.grid, tol=cfg.tol)


def _amgm(g, cfg):
    return check_covariance_amgm(g, cfg.tol)


def _bobkov(g, cfg):
    return check_bobkov(density_profile_function(g), nodes=cfg.nodes, tol=cfg.tol)


def _density_checker(fn):
    return lambda g, cfg: fn(g, cfg.grid, cfg.tol)


CHECKS = {
    "lsi": _lsi,
    "reversed_lsi": _reversed_lsi,
    **{name: _density_checker(fn) for name, fn in DENSITY_CHECKERS.items()},
    "amgm": _amgm,
    "bobkov": _bobkov,
}


def run_checks(g: Density, cfg: RunConfig, names=None) -> dict[str, InequalityReport]:
    return {name: CHECKS[name](g, cfg) for name in (names or CHECKS)}


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _num(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _metadata(workers: int) -> dict:
    try:
        ver = version("artifact")
    except PackageNotFoundError:
        ver = "unknown"
    return {
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "version": ver,
        "workers": workers,
    }


def render_json(cfg: RunConfig, body: dict, workers: int = 1) -> str:
    doc = {"config": asdict(cfg), **body, "metadata": _metadata(workers)}
    return json.dumps(_jsonable(doc), indent=2) + "\n"


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    path = Path(cfg.out)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _report_row(r: InequalityReport):
    return [r.name, r.lhs, r.rhs, r.slack, r.satisfied, r.tol, r.estimated_error]


REPORT_HEADER = ["inequality", "lhs", "rhs", "slack", "satisfied", "tol", "estimated_error"]


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------


def _floats(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc
    if not vals or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"expected finite numbers, got {text!r}")
    return vals


def _ints(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc
    if not vals:
        raise UsageError("expected at least one integer")
    return vals


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _load_density(path: str) -> Density:
    return from_json(_read_json(path))


def _base_config(args, inputs: dict) -> RunConfig:
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    nodes = args.nodes if args.nodes is not None else getattr(args, "default_nodes", DEFAULT_NODES)
    if not 2 <= nodes <= 256:
        raise UsageError("--nodes must lie in [2, 256]")
    if getattr(args, "grid", None) is not None and args.grid < 8:
        raise UsageError("--grid must be >= 8")
    return RunConfig(
        subcommand=args.command,
        inputs=inputs,
        tol=args.tol,
        nodes=nodes,
        grid=getattr(args, "grid", None),
        seed=getattr(args, "seed", None),
        format=args.format,
        out=args.out,
    )


def _status(reports) -> int:
    return EXIT_OK if all(r.satisfied for r in reports) else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    names = args.inequality or list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown inequality {unknown[0]!r}; choose from {', '.join(CHECKS)}")
    cfg = _base_config(args, {"density": args.density, "inequality": names})
    g = _load_density(args.density)
    reports = run_checks(g, cfg, names)
    if cfg.format == "csv":
        text = _csv(REPORT_HEADER, [_report_row(r) for r in reports.values()])
    else:
        body = {"density": describe(g), "reports": {k: r.to_dict() for k, r in reports.items()},
                "satisfied": all(r.satisfied for r in reports.values())}
        text = render_json(cfg, body)
    _emit(text, cfg)
    return _status(reports.values())


def _suite_item(g: Density, cfg: RunConfig) -> dict:
    reports = run_checks(g, cfg)
    bundle = equivalence_roundtrip(g, cfg.grid)
    return {"density": describe(g), "reports": reports, "equivalence": bundle}


def suite_results(densities, cfg: RunConfig, workers: int = 1) -> list[dict]:
    """Run every checker and the equivalence bundle on each density, in input order."""
    if workers <= 1:
        return [_suite_item(g, cfg) for g in densities]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda g: _suite_item(g, cfg), densities))


def cmd_suite(args) -> int:
    if args.corpus:
        inputs = {"corpus": args.corpus}
        try:
            densities = corpus_mod.load(args.corpus)
        except OSError as exc:
            raise UsageError(f"cannot read {args.corpus}: {exc}") from exc
    else:
        spec = corpus_mod.CorpusSpec(seed=args.seed, count=args.count, dimension=args.dimension,
                                     family=args.family)
        inputs = {"corpus_spec": spec.to_dict()}
        densities = corpus_mod.generate(spec)
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    cfg = _base_config(args, inputs)
    results = suite_results(densities, cfg, args.workers)

    summary: dict[str, float] = {}
    ok = True
    for item in results:
        for name, r in item["reports"].items():
            summary[name] = min(summary.get(name, math.inf), r.slack)
            ok &= r.satisfied
        b = item["equivalence"]
        summary["transported_gap_max"] = max(summary.get("transported_gap_max", 0.0), b.transported_gap)
        ok &= b.consistent

    if cfg.format == "csv":
        rows = []
        for i, item in enumerate(results):
            rows += [[i] + _report_row(r) for r in item["reports"].values()]
            rows.append([i, "transported_gap", "", "", item["equivalence"].transported_gap,
                         item["equivalence"].consistent, "", ""])
        rows += [["summary", f"min_slack:{k}" if k != "transported_gap_max" else k, "", "", v, "", "", ""]
                 for k, v in summary.items()]
        text = _csv(["index"] + REPORT_HEADER, rows)
    else:
        body = {
            "results": [
                {"index": i, "density": item["density"],
                 "reports": {k: r.to_dict() for k, r in item["reports"].items()},
                 "equivalence": item["equivalence"].to_dict()}
                for i, item in enumerate(results)
            ],
            "summary": {"min_slack": {k: v for k, v in summary.items() if k != "transported_gap_max"},
                        "transported_gap_max": summary.get("transported_gap_max", 0.0),
                        "count": len(results)},
            "satisfied": bool(ok),
        }
        text = render_json(cfg, body, args.workers)
    _emit(text, cfg)
    return EXIT_OK if ok else EXIT_VIOLATION


def _saturation_vectors(args) -> list[list[float]]:
    if args.a:
        return [_floats(v) for v in args.a]
    rng = corpus_mod.stream(args.seed, 0)
    return [rng.uniform(-2.0, 2.0, size=n).tolist() for n, k in ((1, 20), (2, 10)) for _ in range(k)]


def cmd_saturate(args) -> int:
    vectors = _saturation_vectors(args)
    cfg = _base_config(args, {"a": vectors, "method": args.method})
    tol = 1e-6 if cfg.tol is None else cfg.tol
    rows = []
    violated = False
    for a in vectors:
        f = exp_witness(a)
        lsi = check_lsi_gross(f, method=args.method, nodes=cfg.nodes)
        rev = check_reversed_lsi(f, method=args.method, nodes=cfg.nodes)
        row = {"a": a, "lsi_lhs": lsi.lhs, "lsi_rhs": lsi.rhs, "lsi_abs_slack": abs(lsi.slack),
               "reversed_lhs": rev.lhs, "reversed_rhs": rev.rhs, "reversed_abs_slack": abs(rev.slack)}
        scale = max(abs(lsi.rhs), abs(rev.rhs), 1e-300)
        row["within_tol"] = max(abs(lsi.slack), abs(rev.slack)) / scale <= tol
        violated |= not row["within_tol"]
        rows.append(row)
    if cfg.format == "csv":
        header = ["a", "lsi_lhs", "lsi_rhs", "lsi_abs_slack", "reversed_lhs", "reversed_rhs",
                  "reversed_abs_slack", "within_tol"]
        text = _csv(header, [[" ".join(_num(v) for v in r["a"])] + [r[k] for k in header[1:]] for r in rows])
    else:
        text = render_json(cfg, {"tolerance": tol, "rows": rows, "satisfied": not violated})
    _emit(text, cfg)
    return EXIT_VIOLATION if violated else EXIT_OK


def _function(name: str, n: int = 1):
    if name not in NAMED_FUNCTIONS:
        raise UsageError(f"unknown function {name!r}; choose from {', '.join(NAMED_FUNCTIONS)}")
    return named_function(name, n)


def cmd_semigroup(args) -> int:
    if not args.t > 0:
        raise UsageError("--t must be positive")
    if args.slices < 2 or args.slices % 2:
        raise UsageError("--slices must be an even integer >= 2")
    f = _function(args.function, args.dimension)
    x = _floats(args.x) if args.x else [0.0] * args.dimension
    if len(x) != args.dimension:
        raise UsageError("--x must have one coordinate per dimension")
    cfg = _base_config(args, {"function": args.function, "t": args.t, "x": x, "slices": args.slices,
                              "dimension": args.dimension})
    trace = interpolation_identity(f, args.t, np.array(x), args.slices, cfg.nodes)
    tol = 1e-4 if cfg.tol is None else cfg.tol
    ok = trace.identity_gap <= tol * (1.0 + abs(trace.identity_lhs)) and trace.pointwise_sandwich()
    if cfg.format == "csv":
        text = trace.to_csv()
    else:
        body = {"trace": trace.to_dict(), "identity_gap": trace.identity_gap, "satisfied": bool(ok)}
        text = render_json(cfg, body)
    _emit(text, cfg)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_clt(args) -> int:
    n_list = _ints(args.n_list)
    if any(n < 1 for n in n_list):
        raise UsageError("--n-list entries must be positive")
    f = _function(args.function)
    cfg = _base_config(args, {"function": args.function, "n_list": n_list})
    rows = clt_pipeline(f, n_list, nodes=cfg.nodes)
    if cfg.format == "csv":
        text = _csv(CLT_HEADER, [[getattr(r, k) for k in CLT_HEADER] for r in rows])
    else:
        text = render_json(cfg, {"rows": [asdict(r) for r in rows]})
    _emit(text, cfg)
    return EXIT_OK


def cmd_constant(args) -> int:
    ps = _floats(args.p)
    if any(not 0 < p < 1 for p in ps):
        raise UsageError("--p values must lie in (0, 1)")
    size = 401 if args.grid is None else args.grid
    if size < 3:
        raise UsageError("--grid must be >= 3")
    cfg = _base_config(args, {"p": ps, "grid_size": size})
    tol = 1e-3 if cfg.tol is None else cfg.tol
    rows = []
    for p in ps:
        formula = bernoulli_optimal_constant(p)
        scan = scan_optimal_constant(p, size)
        rows.append({"p": p, "formula": formula, "scan": scan, "abs_diff": abs(formula - scan),
                     "agrees": abs(formula - scan) <= tol})
    ok = all(r["agrees"] for r in rows)
    if cfg.format == "csv":
        header = ["p", "formula", "scan", "abs_diff", "agrees"]
        text = _csv(header, [[r[k] for k in header] for r in rows])
    else:
        text = render_json(cfg, {"tolerance": tol, "rows": rows, "satisfied": ok})
    _emit(text, cfg)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_alpha(args) -> int:
    """Scan the scaled entropy bound over alpha and locate its minimiser."""
    g = _load_density(args.density)
    trK = float(np.trace(covariance(g)))
    opt = optimal_alpha(trK, g.n)
    alphas = _floats(args.alpha) if args.alpha else \
        (opt.alpha * np.geomspace(0.25, 4.0, args.points)).tolist()
    if any(a <= 0 for a in alphas):
        raise UsageError("--alpha values must be positive")
    cfg = _base_config(args, {"density": args.density, "alpha": alphas})
    h = shannon_entropy(g, cfg.grid).value
    rows = []
    for a in alphas:
        scaled = scale_family(g, a)
        ent = h - g.n * math.log(a)
        rhs = 0.5 * float(np.trace(covariance(scaled))) + 0.5 * g.n * math.log(2 * math.pi)
        rows.append({"alpha": a, "scaled_entropy": ent, "scaled_bound": rhs,
                     "bound_on_H": rhs + g.n * math.log(a)})
    best = min(range(len(rows)), key=lambda i: rows[i]["bound_on_H"])
    report = make_report("reversed_euclidean_at_alpha_star", h, opt.bound, describe(g), 0.0, cfg.tol)
    if cfg.format == "csv":
        header = ["alpha", "scaled_entropy", "scaled_bound", "bound_on_H"]
        text = _csv(header, [[r[k] for k in header] for r in rows])
    else:
        body = {"alpha_star": opt.alpha, "bound_at_alpha_star": opt.bound, "scan_argmin": rows[best]["alpha"],
                "rows": rows, "report": report.to_dict(), "satisfied": report.satisfied}
        text = render_json(cfg, body)
    _emit(text, cfg)
    return _status([report])


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revlsi", description="Numerical checks of Gaussian log-Sobolev inequalities.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override the reporting tolerance")
    common.add_argument("--nodes", type=int, default=None, help="Gauss-Hermite points per axis (default 64; 96 for clt)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid", type=int, default=None, help="grid points per axis for density quadrature")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common, grid], help="run checkers on one density")
    p.add_argument("--density", required=True, help="density JSON file")
    p.add_argument("--inequality", action="append", help=f"one of {', '.join(CHECKS)} (repeatable; default all)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("suite", parents=[common, grid], help="all checkers on a corpus")
    p.add_argument("--corpus", default=None, help="corpus JSON file (default: generate from --seed)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--dimension", type=int, choices=(1, 2), default=None)
    p.add_argument("--family", choices=("gaussian", "mixture"), default="mixture")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("saturate", parents=[common], help="LSI equality cases exp(a.x)")
    p.add_argument("--a", action="append", help="comma-separated vector a (repeatable)")
    p.add_argument("--seed", type=int, default=42, help="seed for the default a vectors")
    p.add_argument("--method", choices=("analytic", "quadrature"), default="analytic")
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("semigroup", parents=[common], help="entropy interpolation along the heat flow")
    p.add_argument("--function", default="exp", help=f"one of {', '.join(NAMED_FUNCTIONS)}")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--x", default=None, help="comma-separated evaluation point (default origin)")
    p.add_argument("--dimension", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--slices", type=int, default=DEFAULT_SLICES)
    p.set_defaults(func=cmd_semigroup)

    p = sub.add_parser("clt", parents=[common], help="cube-to-Gaussian convergence table")
    p.add_argument("--function", default="exp", help=f"one of {', '.join(NAMED_FUNCTIONS)}")
    p.add_argument("--n-list", default="4,16,64,256,1024")
    p.set_defaults(func=cmd_clt, default_nodes=96)

    p = sub.add_parser("constant", parents=[common, grid], help="two-point constant: formula vs scan")
    p.add_argument("--p", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("alpha", parents=[common, grid], help="scaling-family bound as a function of alpha")
    p.add_argument("--density", required=True)
    p.add_argument("--alpha", default=None, help="comma-separated alphas (default 33 points on [a*/4, 4a*])")
    p.add_argument("--points", type=int, default=33)
    p.set_defaults(func=cmd_alpha)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, LabError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"revlsi {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
