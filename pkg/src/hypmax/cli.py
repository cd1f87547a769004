"""Command-line front end.

Every command writes a JSON report (``--out``, default ``<command>.json``)
and prints a one-line summary.  Exit status: 0 when all checks pass, 1 when
a verification fails, 2 on usage or numerical errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .geometry import EuclideanBall, HyperbolicBall, Point, euclid_to_hyp, hyp_to_euclid
from .integrate import QuadratureError, mc_ball_measure
from .maximal import DiracAtom, ExtrapolationError, maximal_atoms, maximal_dirac
from .measures import ball_measure, spec_from_name_or_path
from .verify import (
    GrowthScanParams,
    WeakTypeParams,
    _jsonable,
    growth_scan,
    proof_step_suite,
    weak_type_probe,
)

SCHEMA_VERSION = 1
THREADS_ENV = "HYPMAX_THREADS"


class UsageError(Exception):
    pass


def _floats(text, n=None, name="value"):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{name}: expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) not in (n if isinstance(n, tuple) else (n,)):
        raise UsageError(f"{name}: expected {n} numbers, got {len(vals)}")
    return vals


def _pair(text, name):
    lo, hi = _floats(text, 2, name)
    return (lo, hi)


def _positive(kind=float):
    def parse(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypmax", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, measure=True):
        p.add_argument("--out", help="JSON report path (default: <command>.json)")
        if measure:
            p.add_argument("--measure", default="paper",
                           help="'paper', 'finite-variant', 'm1', 'm2', or a JSON measure file")
            p.add_argument("--tol", type=_positive(), default=1e-9, help="absolute quadrature tolerance")

    p = sub.add_parser("convert", help="convert a ball between euclidean and hyperbolic form")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--euclid", metavar="A,B,R", help="euclidean center (a, b) and radius r")
    g.add_argument("--hyp", metavar="X,Y,S", help="hyperbolic center (x, y) and radius s")
    common(p, measure=False)

    p = sub.add_parser("measure", help="measure of a ball by quadrature (optionally Monte Carlo)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--euclid", metavar="A,B,R")
    g.add_argument("--hyp", metavar="X,Y,S")
    g.add_argument("--disk", metavar="A,B,R", help="raw disk, may touch the x-axis (r >= b)")
    p.add_argument("--mc", type=_positive(int), metavar="N", help="also run a Monte Carlo oracle")
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("maximal", help="centered maximal function of Dirac atoms at a point")
    p.add_argument("--at", required=True, metavar="X,Y")
    p.add_argument("--atom", action="append", required=True, metavar="X,Y[,MASS]")
    p.add_argument("--grid", action="store_true", help="use the radius grid even for one atom")
    p.add_argument("--grid-min", type=_positive(), default=1e-3)
    p.add_argument("--grid-max", type=_positive(), default=1e2)
    p.add_argument("--grid-count", type=_positive(int), default=200)
    p.add_argument("--refine", type=int, default=2)
    common(p)

    p = sub.add_parser("growth-scan", help="scan mu(B_h(w, s)) / s over a grid")
    p.add_argument("--x-range", default="-20,20")
    p.add_argument("--x-count", type=_positive(int), default=40)
    p.add_argument("--y-range", default="0.001,20")
    p.add_argument("--y-count", type=_positive(int), default=40)
    p.add_argument("--s-range", default="0.001,10")
    p.add_argument("--s-count", type=_positive(int), default=40)
    p.add_argument("--rtol", type=_positive(), default=1e-8)
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("--max-ratio", type=_positive(), help="fail unless the sup is at most this")
    p.add_argument("--max-drift", type=_positive(), default=0.1,
                   help="fail if refinement moves the sup by more than this fraction")
    p.add_argument("--csv", help="CSV table path (default: growth-scan.csv)")
    p.add_argument("--threads", type=_positive(int),
                   default=int(os.environ.get(THREADS_ENV, "1")))
    common(p)

    p = sub.add_parser("weaktype", help="weak (1,1) failure probe on the strip at R")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("suite", help="run the inequality checks I1-I10")
    p.add_argument("--R", type=float, action="append", help="repeatable; default 10 and 100")
    p.add_argument("--samples", type=_positive(int), default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-r0", action="store_true", help="skip the search for R0")
    common(p)
    return parser


def _ball_from_args(args):
    if args.euclid:
        a, b, r = _floats(args.euclid, 3, "--euclid")
        return EuclideanBall(Point(a, b), r)
    if args.hyp:
        x, y, s = _floats(args.hyp, 3, "--hyp")
        return HyperbolicBall(Point(x, y), s)
    return tuple(_floats(args.disk, 3, "--disk"))


def _ball_dict(ball):
    if isinstance(ball, tuple):
        return {"kind": "disk", "center": list(ball[:2]), "radius": ball[2]}
    kind = "euclidean" if isinstance(ball, EuclideanBall) else "hyperbolic"
    return {"kind": kind, "center": [ball.center.x, ball.center.y], "radius": ball.radius}


def cmd_convert(args):
    ball = _ball_from_args(args)
    other = euclid_to_hyp(ball) if isinstance(ball, EuclideanBall) else hyp_to_euclid(ball)
    summary = (f"center ({other.center.x:.12g}, {other.center.y:.12g}), "
               f"radius {other.radius:.12g}")
    return {"input": _ball_dict(ball), "output": _ball_dict(other)}, True, summary


def cmd_measure(args):
    spec = spec_from_name_or_path(args.measure)
    ball = _ball_from_args(args)
    result = {"ball": _ball_dict(ball)}
    try:
        est = ball_measure(spec, ball, tol=args.tol)
        ok = True
    except QuadratureError as exc:
        est, ok = exc.estimate, False
    result["quadrature"] = est.to_dict()
    summary = f"mu = {est.value:.12g} ± {est.err:.2g}"
    if args.mc:
        mc = mc_ball_measure(spec, ball, args.mc, args.seed)
        sigma = est.err + mc.err
        z = abs(est.value - mc.value) / sigma if sigma > 0 else 0.0
        result["monte_carlo"] = mc.to_dict()
        result["z"] = z
        ok = ok and z <= 3.0
        summary += f"; monte carlo {mc.value:.6g} ± {mc.err:.2g} (z = {z:.2f})"
    return result, ok, summary


def cmd_maximal(args):
    spec = spec_from_name_or_path(args.measure)
    w = Point(*_floats(args.at, 2, "--at"))
    atoms = []
    for text in args.atom:
        vals = _floats(text, (2, 3), "--atom")
        atoms.append(DiracAtom(Point(vals[0], vals[1]), vals[2] if len(vals) == 3 else 1.0))
    if len(atoms) == 1 and not args.grid:
        method = "dirac_limit"
        value = maximal_dirac(spec, w, atoms[0], tol=args.tol)
    else:
        method = "radius_grid_lower_bound"
        grid = np.geomspace(args.grid_min, args.grid_max, args.grid_count)
        value = maximal_atoms(spec, w, atoms, radius_grid=grid, refine=args.refine, tol=args.tol)
    result = {"point": [w.x, w.y], "atoms": [[a.location.x, a.location.y, a.mass] for a in atoms],
              "method": method, "maximal": value.to_dict()}
    if value.is_infinite:
        shown = "inf"
    elif math.isinf(value.value):
        shown = f"exp({value.log_value:.10g})"
    else:
        shown = f"{value.value:.10g}"
    return result, True, f"M = {shown} (radius {value.achieving_radius:.6g}, {method})"


def cmd_growth_scan(args):
    spec = spec_from_name_or_path(args.measure)
    params = GrowthScanParams(
        x_range=_pair(args.x_range, "--x-range"), x_count=args.x_count,
        y_range=_pair(args.y_range, "--y-range"), y_count=args.y_count,
        s_range=_pair(args.s_range, "--s-range"), s_count=args.s_count,
        tol=args.tol, rtol=args.rtol)
    report = growth_scan(spec, params, refine=not args.no_refine, workers=args.threads)
    csv_path = args.csv or "growth-scan.csv"
    write_growth_csv(report, csv_path)
    ok = report.passed and report.stability_delta <= args.max_drift
    if args.max_ratio is not None:
        ok = ok and report.empirical_constant <= args.max_ratio
    result = report.to_dict()
    result["csv"] = os.path.basename(csv_path)
    summary = (f"sup mu(B)/s = {report.sup_ratio:.6g} at {report.argsup}; "
               f"refinement drift {report.stability_delta:.2%}")
    return result, ok, summary


def cmd_weaktype(args):
    spec = spec_from_name_or_path(args.measure)
    report = weak_type_probe(spec, WeakTypeParams(args.R, args.samples, args.tol, args.seed))
    summary = (f"R = {args.R:g}: level {report.level:.6g}, {len(report.violations)} violations "
               f"in {args.samples} samples, weak constant >= {report.weak_constant_lower_bound:.6g}")
    return report.to_dict(), report.passed, summary


def cmd_suite(args):
    spec = spec_from_name_or_path(args.measure)
    R_values = tuple(args.R) if args.R else (10.0, 100.0)
    report = proof_step_suite(spec, R_values, args.samples, args.seed, tol=min(args.tol, 1e-10),
                              find_r0=not args.no_r0)
    failed = [c.id for c in report.checks if not c.passed]
    summary = f"{len(report.checks) - len(failed)}/{len(report.checks)} checks pass"
    if failed:
        summary += f"; failing: {', '.join(failed)}"
    if report.R0:
        summary += f"; R0 = {report.R0['R0']:.6g}"
    return report.to_dict(), report.passed, summary


COMMANDS = {
    "convert": cmd_convert,
    "measure": cmd_measure,
    "maximal": cmd_maximal,
    "growth-scan": cmd_growth_scan,
    "weaktype": cmd_weaktype,
    "suite": cmd_suite,
}


def write_growth_csv(report, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "s", "mu", "err", "ratio", "converged"])
        for row in report.table_rows():
            writer.writerow([repr(float(v)) for v in row[:6]] + [int(row[6])])


def read_growth_csv(path):
    """Rows of a growth-scan CSV as dicts of floats (``converged`` as bool)."""
    with open(path, newline="") as fh:
        rows = []
        for row in csv.DictReader(fh):
            rec = {k: float(v) for k, v in row.items() if k != "converged"}
            rec["converged"] = row["converged"] == "1"
            rows.append(rec)
    return rows


def _resolved_config(args):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "threads")}
    return _jsonable(cfg)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, ok, summary = COMMANDS[args.command](args)
    except (UsageError, ValueError, TypeError, OSError, QuadratureError, ExtrapolationError,
            ZeroDivisionError) as exc:
        print(f"hypmax {args.command}: error: {exc}", file=sys.stderr)
        return 2
    report = {"schema_version": SCHEMA_VERSION, "command": args.command,
              "config": _resolved_config(args), "passed": bool(ok), "result": result}
    out = args.out or f"{args.command}.json"
    with open(out, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    print(f"{'PASS' if ok else 'FAIL'} {args.command}: {summary}")
    return 0 if ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
