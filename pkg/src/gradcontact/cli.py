"""Command-line front end.

    gradcontact solve    [--preset NAME] [--config PATH] [--set k=v ...] [--out DIR]
    gradcontact sweep    [--preset NAME] [--config PATH] [--set k=v ...] [--out DIR] [--workers K]
    gradcontact validate [--perturb CHECK ...] [--only CHECK ...]
    gradcontact preset list | show NAME

All quantities are in the nondimensional units of the model; no unit
conversion is done. Exit codes: 0 success, 2 configuration error,
3 solver failure, 4 validation failure.
"""

import argparse
import csv
import logging
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import PRESETS, ConfigError, load_config, preset_text, problem_from
from .displacement import surface_displacement
from .solver import defining_residual, solve

log = logging.getLogger("gradcontact")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_VALIDATION = 0, 2, 3, 4

RECORD_FIELDS = [
    "tag", "status", "error",
    "e1", "alpha1", "nu1", "e2", "alpha2", "nu2", "Q0", "Q1", "P", "model", "gamma_s",
    "N", "eps", "branch", "swapped",
    "b", "delta", "p0", "b_star",
    "defining_residual", "endpoint_residual", "load_error", "truncation_tail", "cond",
    "seconds",
]


def fmt(v):
    """12 significant digits for floats; plain text otherwise."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{float(v):.12g}"
    return str(v)


def _inputs(problem):
    """Material and load inputs in the caller's original body order."""
    b1, b2 = problem.body1, problem.body2
    if problem.swapped:
        b1, b2 = b2, b1
    return {
        "e1": b1.e, "alpha1": b1.alpha, "nu1": b1.nu,
        "e2": b2.e, "alpha2": b2.alpha, "nu2": b2.nu,
        "Q0": problem.profile.Q0, "Q1": problem.profile.Q1, "P": problem.P,
        "model": problem.model, "gamma_s": problem.gamma_s,
        "N": problem.N, "eps": problem.eps, "swapped": problem.swapped,
    }


def _traces(solution, values):
    """Pressure and displacement samples requested by the output settings."""
    out = {}
    b = solution.b
    n_p = values["pressure_samples"]
    if n_p:
        x = b * np.linspace(-1.0, 1.0, n_p)
        out["pressure"] = (("x", "p"), np.column_stack([x, solution.pressure(x)]))
    n_v = values["displacement_samples"]
    if n_v:
        xmax = -b * (1 + values["displacement_gap"])
        xmin = values["displacement_xmin"]
        if xmin >= xmax:
            raise ConfigError(f"output.displacement_xmin={xmin} must be below -b={-b:.6g}")
        x = np.linspace(xmin, xmax, n_v)
        problem = solution.problem
        for user_body in (1, 2):
            v = surface_displacement(solution, problem.stored_body(user_body), x)
            # the upper body moves up by v_1, the lower body down by v_2
            uy = v if user_body == 1 else -v
            out[f"body{user_body}"] = (("x", "v", "u_y"), np.column_stack([x, v, uy]))
    return out


def run_point(values):
    """Solve one configuration; never raises for solver failures."""
    record = {k: None for k in RECORD_FIELDS}
    record["tag"] = values["tag"]
    t0 = time.perf_counter()
    try:
        problem = problem_from(values)
    except ConfigError as exc:
        record.update(status="config-error", error=str(exc))
        return record, {}
    record.update(_inputs(problem))
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            sol = solve(problem, branch=values["branch"])
            resid = defining_residual(sol)
            tol = values["residual_tol"]
            if not abs(resid) <= tol:
                raise ArithmeticError(f"defining residual {resid:.3e} exceeds {tol:.0e}")
            traces = _traces(sol, values)
        d = sol.diagnostics
        record.update(
            status="ok",
            error="; ".join(sorted({str(w.message) for w in caught})) or None,
            branch=sol.branch, b=sol.b, delta=sol.delta,
            p0=float(sol.pressure(0.0)), b_star=d.b_star,
            defining_residual=resid, endpoint_residual=d.endpoint_residual,
            load_error=d.load_error, truncation_tail=d.truncation_tail, cond=d.cond,
        )
    except ConfigError:
        raise
    except Exception as exc:  # failures are reported per record
        record.update(status="solver-error", error=f"{type(exc).__name__}: {exc}")
        for k in ("b", "delta", "p0", "b_star"):
            record[k] = None
        traces = {}
    record["seconds"] = time.perf_counter() - t0
    return record, traces


def _write_csv(path, header, rows, comment):
    with open(path, "w", newline="") as fh:
        fh.write(f"# {comment}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def _emit(out_dir, cfg, results):
    os.makedirs(out_dir, exist_ok=True)
    comment = f"config: {cfg.describe()} | source: {cfg.source}"
    _write_csv(
        os.path.join(out_dir, "summary.csv"),
        RECORD_FIELDS,
        [[rec[k] for k in RECORD_FIELDS] for rec, _ in results],
        comment,
    )
    for rec, traces in results:
        for name, (cols, data) in traces.items():
            fname = f"pressure_{rec['tag']}.csv" if name == "pressure" else f"displacement_{rec['tag']}_{name}.csv"
            note = comment
            if name != "pressure":
                note += " | v: normal displacement toward the other body; u_y: vertical surface displacement"
            _write_csv(os.path.join(out_dir, fname), cols, data.tolist(), note)


def _print_records(results):
    for rec, _ in results:
        if rec["status"] == "ok":
            extra = f"  b_star={fmt(rec['b_star'])}" if rec["b_star"] is not None else ""
            print(f"{rec['tag']}: b={fmt(rec['b'])}  delta={fmt(rec['delta'])}  p(0)={fmt(rec['p0'])}{extra}")
        else:
            print(f"{rec['tag']}: {rec['status']}: {rec['error']}")


def cmd_solve(args):
    cfg = load_config(args.config, args.preset, args.set)
    if cfg.axes:
        raise ConfigError("configuration defines sweep axes; use 'sweep'")
    results = [run_point(cfg.values)]
    if args.out:
        _emit(args.out, cfg, results)
    _print_records(results)
    return EXIT_OK if results[0][0]["status"] == "ok" else EXIT_SOLVER


def cmd_sweep(args):
    cfg = load_config(args.config, args.preset, args.set)
    points = cfg.points()
    for i, pt in enumerate(points):
        pt["tag"] = f"{cfg.values['tag']}-{i:03d}"
    if args.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(run_point, points))
    else:
        results = [run_point(pt) for pt in points]
    if args.out:
        _emit(args.out, cfg, results)
    _print_records(results)
    return EXIT_OK if all(rec["status"] == "ok" for rec, _ in results) else EXIT_SOLVER


def cmd_validate(args):
    from .validation import run_validation

    try:
        results = run_validation(perturb=args.perturb or (), names=args.only)
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


def cmd_preset(args):
    if args.action == "list":
        width = max(map(len, PRESETS))
        for name in sorted(PRESETS):
            print(f"{name:<{width}}  {PRESETS[name]['description']}")
        return EXIT_OK
    if not args.name:
        raise ConfigError("preset show needs a NAME")
    print(preset_text(args.name), end="")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="gradcontact", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--preset", help="start from a built-in preset")
        p.add_argument("--config", help="INI file with [problem], [numerics], [output], [sweep]")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a setting (repeatable); KEY may be section.key")
        p.add_argument("--out", help="directory for CSV output")

    p = sub.add_parser("solve", help="solve one configuration")
    common(p)
    p.set_defaults(func=cmd_solve)
    p = sub.add_parser("sweep", help="solve the Cartesian product of the sweep axes")
    common(p)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("validate", help="run the oracle cross-check suite")
    p.add_argument("--perturb", action="append", metavar="CHECK",
                   help="negative control: perturb the production side of CHECK ('all' for every check)")
    p.add_argument("--only", action="append", metavar="CHECK")
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("preset", help="list or show built-in presets")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_preset)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
