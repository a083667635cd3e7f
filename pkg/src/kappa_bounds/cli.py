"""Command-line front end: ``bound``, ``verify`` and ``curve`` subcommands.

Exit codes: 0 success, 1 a bound was violated, 2 usage or configuration
error.  Expected-log values are in natural-log units.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .bounds import (
    LOWER_CONSTANT_RANGE,
    UPPER_CONSTANT_RANGE,
    expected_log_upper,
    lower_tail,
    upper_tail,
)
from .errors import KappaBoundsError
from .montecarlo import SampleConfig, run_trials
from .oracle import tail_probability_m2
from .shapes import Field, MatrixShape, Scaling, TailQuery, raw_from_scaled, scaled_from_raw
from .verify import load_grid, run_verification

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

SEED_ENV = "KAPPA_BOUNDS_SEED"
DEFAULT_SEED = 20050817

CURVE_COLUMNS = (
    "x_scaled",
    "x_raw",
    "upper_bound",
    "lower_bound",
    "valid",
    "oracle",
    "empirical",
    "ci_low",
    "ci_high",
)


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw, 0)
    except ValueError:
        raise KappaBoundsError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _add_shape_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, required=True, help="row count (>= 2)")
    p.add_argument("--n", type=int, required=True, help="column count (>= 2)")
    p.add_argument("--field", choices=("real", "complex"), default="real")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kappa-bounds",
        description="Tail and expected-log bounds for 2-norm condition numbers of "
        "Gaussian random matrices, with Monte Carlo and quadrature checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser(
        "bound",
        help="evaluate the analytic tail bounds at one threshold",
        description="Evaluate upper/lower tail bounds at one threshold. The expected-log "
        "bound is printed in natural-log units.",
    )
    _add_shape_args(b)
    b.add_argument("--x", type=float, required=True, help="threshold")
    b.add_argument("--scaling", choices=("scaled", "raw"), default="scaled",
                   help="scaled: kappa/(n/d) > x; raw: kappa > x")
    b.add_argument("--format", choices=("table", "json"), default="table")

    v = sub.add_parser("verify", help="run the Monte Carlo / oracle bracketing harness")
    v.add_argument("--grid", default="smoke",
                   help="preset name (smoke, desk, deep-tail) or path to a key=value grid file")
    v.add_argument("--trials", type=int, default=None, help="override the grid's trial count")
    v.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out", type=Path, default=None, help="JSON report path (default stdout)")

    c = sub.add_parser("curve", help="CSV of bounds, oracle and empirical tail over an x sweep")
    _add_shape_args(c)
    c.add_argument("--x-min", type=float, required=True)
    c.add_argument("--x-max", type=float, required=True)
    c.add_argument("--points", type=int, default=50)
    c.add_argument("--scaling", choices=("scaled", "raw"), default="scaled",
                   help="how --x-min/--x-max are read")
    c.add_argument("--trials", type=int, default=None, help="add empirical columns from this many trials")
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--out", type=Path, default=None, help="CSV path (default stdout)")
    return parser


def bound_payload(query: TailQuery) -> dict:
    ub, lb = upper_tail(query), lower_tail(query)
    field = query.field
    return {
        "m": query.shape.m,
        "n": query.shape.n,
        "d": query.shape.d,
        "field": str(field),
        "x_scaled": query.x_scaled,
        "x_raw": query.x_raw,
        "valid": query.valid,
        "upper": {
            "value": ub.value,
            "log10": ub.log10_value,
            "informative": ub.informative,
            "constant": ub.constant_used,
            "constant_range": list(UPPER_CONSTANT_RANGE[field]),
        },
        "lower": {
            "value": lb.value,
            "log10": lb.log10_value,
            "informative": lb.informative,
            "constant": lb.constant_used,
            "constant_range": list(LOWER_CONSTANT_RANGE[field]),
        },
        "expected_log_upper": expected_log_upper(query.shape, field),
    }


def _bound_table(p: dict) -> str:
    head = (
        f"{p['field']} {p['m']}x{p['n']}  d={p['d']}  "
        f"x_scaled={p['x_scaled']:.6g}  x_raw={p['x_raw']:.6g}  valid={str(p['valid']).lower()}"
    )
    rows = [head, f"{'bound':<8}{'P':>14}{'log10 P':>12}{'constant':>10}  range"]
    for name in ("upper", "lower"):
        b = p[name]
        lo, hi = b["constant_range"]
        rows.append(
            f"{name:<8}{min(b['value'], 1.0):>14.6g}{b['log10']:>12.6g}{b['constant']:>10.6g}"
            f"  [{lo:.6g}, {hi:.6g}]"
        )
    rows.append(f"E[ln kappa] < {p['expected_log_upper']:.6g}")
    return "\n".join(rows)


def cmd_bound(args) -> int:
    query = TailQuery(MatrixShape(args.m, args.n), Field.parse(args.field), args.x, Scaling.parse(args.scaling))
    payload = bound_payload(query)
    if not query.valid:
        print(
            f"warning: scaled x = {query.x_scaled:.6g} < d = {query.shape.d}; "
            "the bounds carry no guarantee here",
            file=sys.stderr,
        )
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(_bound_table(payload))
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = load_grid(args.grid)
    seed = default_seed() if args.seed is None else args.seed
    report = run_verification(grid, trials=args.trials, seed=seed, workers=args.workers)
    text = json.dumps(report, indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
        s = report["summary"]
        print(
            f"{s['tail_passed']}/{s['tail_cases']} tail cases, "
            f"{s['log_moment_passed']}/{s['log_moment_cases']} log-moment cases passed -> {args.out}",
            file=sys.stderr,
        )
    return EXIT_OK if report["summary"]["all_passed"] else EXIT_VIOLATION


def sweep(x_min: float, x_max: float, points: int) -> list[float]:
    if not (0 < x_min <= x_max and math.isfinite(x_max)) or points < 1:
        raise KappaBoundsError(f"invalid sweep x in [{x_min}, {x_max}] with {points} points")
    if points == 1:
        return [x_min]
    lo, hi = math.log(x_min), math.log(x_max)
    xs = [math.exp(lo + (hi - lo) * i / (points - 1)) for i in range(points)]
    xs[0], xs[-1] = x_min, x_max
    return xs


def curve_rows(shape: MatrixShape, field: Field, scaling: Scaling, xs: list[float],
               trials: int | None, seed: int, workers: int) -> list[dict]:
    queries = [TailQuery(shape, field, x, scaling) for x in xs]
    empirical = None
    if trials is not None:
        raw = sorted(q.x_raw for q in queries)
        sim = run_trials(SampleConfig(shape, field, trials, seed, workers), raw)
        empirical = {t.threshold: t for t in sim.tails}
    rows = []
    for q in queries:
        row = {
            "x_scaled": repr(q.x_scaled),
            "x_raw": repr(q.x_raw),
            "upper_bound": repr(upper_tail(q).value),
            "lower_bound": repr(lower_tail(q).value),
            "valid": "true" if q.valid else "false",
            "oracle": "",
            "empirical": "",
            "ci_low": "",
            "ci_high": "",
        }
        if shape.m == 2 and q.x_raw >= 1.0:
            row["oracle"] = repr(tail_probability_m2(shape.n, field, q.x_raw).probability)
        if empirical is not None:
            t = empirical[q.x_raw]
            row.update(empirical=repr(t.estimate), ci_low=repr(t.ci_low), ci_high=repr(t.ci_high))
        rows.append(row)
    return rows


def cmd_curve(args) -> int:
    shape = MatrixShape(args.m, args.n)
    xs = sweep(args.x_min, args.x_max, args.points)
    seed = default_seed() if args.seed is None else args.seed
    rows = curve_rows(shape, Field.parse(args.field), Scaling.parse(args.scaling), xs,
                      args.trials, seed, args.workers)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=CURVE_COLUMNS, lineterminator="\r\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


COMMANDS = {"bound": cmd_bound, "verify": cmd_verify, "curve": cmd_curve}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except KappaBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
