"""Command-line front end.

Every report is printed as ``KEY=VALUE`` lines.  Exit status: 0 certified or
all checks passed, 2 inconclusive, 3 refuted, 1 usage or internal error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .alpha import alpha_asymptotic_gap, alpha_new, alpha_refine, b_solver, lagrange_report, solve_x_plus_xk
from .certify import CERTIFIED, INCONCLUSIVE, REFUTED, Certificate, VerifyConfig, emit_certificate, verify_exponent
from .combinatorics import h_poly
from .exact import Interval, format_rational, interval_log
from .forms import inequality_scan
from .suites import SUITES, run_suite

PRECISION_ENV = "ENTROPY_CERT_PRECISION"
DEFAULT_PRECISION = 256
EXIT_CODES = {CERTIFIED: 0, INCONCLUSIVE: 2, REFUTED: 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def decimal(x: Fraction, digits: int = 20) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {v}")
    return v


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}")
    if v < 16:
        raise UsageError(f"{PRECISION_ENV} must be at least 16")
    return v


def emit(key: str, value) -> None:
    if isinstance(value, bool):
        value = "true" if value else "false"
    elif isinstance(value, Fraction):
        value = format_rational(value)
    print(f"{key}={value}")


def emit_interval(prefix: str, iv: Interval) -> None:
    emit(f"{prefix}_LO", iv.lo)
    emit(f"{prefix}_HI", iv.hi)
    emit(f"{prefix}_DECIMAL", f"[{decimal(iv.lo)}, {decimal(iv.hi)}]")


# ---------------------------------------------------------------------------
# verify


def _read_pairs(path: str) -> list[tuple[int, int]]:
    pairs = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace("/", " ").replace(",", " ").split()
        if len(parts) != 2:
            raise UsageError(f"bad pair line: {line!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    return pairs


def _check_pair(k: int, r: int) -> None:
    if r < 1 or k < r:
        raise UsageError(f"need k >= r >= 1, got k={k} r={r}")


def _verify_one(args: tuple[int, int, VerifyConfig]) -> Certificate:
    k, r, config = args
    return verify_exponent(k, r, config)


def _report_certificate(c: Certificate, out: Path | None) -> None:
    emit("K", c.k)
    emit("R", c.r)
    emit("EXPONENT", f"{c.k}/{c.r}")
    emit_interval("ALPHA", c.alpha_interval())
    emit("P_DEGREE", c.p_degree)
    emit("SIGNS", c.signs)
    emit("DESCARTES_COUNT", c.descartes_count)
    emit("WITNESSES", ",".join(f"{format_rational(x)}:{'+' if s > 0 else '-'}" for x, s in c.witnesses))
    for i, b in enumerate(c.root_brackets, 1):
        emit_interval(f"ROOT{i}", b)
    emit("DIVISIBLE", c.divisible)
    if c.diagnostics:
        emit("DIAGNOSTICS", c.diagnostics)
    if out is not None:
        emit("CERTIFICATE", emit_certificate(c, out))
    emit("VERDICT", c.verdict)


def cmd_verify(args) -> int:
    precision = args.precision_bits or default_precision()
    config = VerifyConfig(precision_bits=precision, max_refinements=args.max_refinements, grid=args.grid)
    if args.pairs:
        if args.k is not None or args.r is not None:
            raise UsageError("--pairs excludes --k/--r")
        pairs = _read_pairs(args.pairs)
        for k, r in pairs:
            _check_pair(k, r)
        out_dir = Path(args.out) if args.out else None
        if out_dir is not None:
            out_dir.mkdir(parents=True, exist_ok=True)
        jobs = [(k, r, config) for k, r in pairs]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                certs = list(pool.map(_verify_one, jobs))
        else:
            certs = [_verify_one(j) for j in jobs]
        worst = 0
        for (k, r), c in zip(pairs, certs):
            path = out_dir / f"cert_{c.k}_{c.r}.json" if out_dir is not None else None
            _report_certificate(c, path)
            worst = max(worst, EXIT_CODES[c.verdict])
        return worst
    if args.k is None or args.r is None:
        raise UsageError("verify needs --k and --r, or --pairs")
    _check_pair(args.k, args.r)
    c = verify_exponent(args.k, args.r, config)
    _report_certificate(c, Path(args.out) if args.out else None)
    return EXIT_CODES[c.verdict]


# ---------------------------------------------------------------------------
# other commands


def cmd_hpoly(args) -> int:
    table = h_poly(args.k, args.r, args.length)
    if args.format == "csv":
        sys.stdout.write(table.to_csv())
    else:
        print(table.to_json())
    return 0


def cmd_alpha(args) -> int:
    if not 1 <= args.r < args.k:
        raise UsageError("alpha needs k > r >= 1")
    if args.width <= 0:
        raise UsageError("--width must be positive")
    a = alpha_refine(alpha_new(args.k, args.r), args.width)
    emit("K", a.k)
    emit("R", a.r)
    emit_interval("ALPHA", a.enclosure)
    emit("WIDTH", a.enclosure.width)
    emit("REFINEMENTS", a.refinements)
    return 0


def cmd_identities(args) -> int:
    checks = run_suite(args.suite, args.kmax, args.rmax)
    failed = 0
    for c in checks:
        emit("CHECK", c.line())
        failed += not c.passed
    emit("PASSED", len(checks) - failed)
    emit("FAILED", failed)
    return 0 if failed == 0 else 2


def cmd_asymptotics(args) -> int:
    k = args.k
    if k < 3:
        raise UsageError("asymptotics needs k >= 3")
    bits = args.precision_bits or default_precision()
    emit("K", k)
    emit_interval("B_K", b_solver(k, bits))
    a = alpha_refine(alpha_new(k, 1), Fraction(1, 1 << bits))
    emit_interval("ALPHA", a.enclosure)
    gap = alpha_asymptotic_gap(k, bits)
    emit_interval("GAP", gap)
    scale = interval_log(k, bits) ** 2 / (k * k)
    emit_interval("LOG2K_OVER_K2", scale)
    emit("GAP_OVER_SCALE_HI", decimal(gap.hi / scale.lo))
    emit("WITHIN_5_SCALE", gap.hi <= 5 * scale.lo)
    return 0


def cmd_lagrange(args) -> int:
    if args.k < 2 or args.N < 1:
        raise UsageError("lagrange needs k >= 2 and N >= 1")
    rep = lagrange_report(args.k, args.N, args.z, args.terms)
    emit("K", args.k)
    emit("N", args.N)
    emit("Z", args.z)
    emit("TERMS", args.terms)
    emit("PARTIAL_SUM", rep.value)
    emit("PARTIAL_SUM_DECIMAL", decimal(rep.value))
    emit("LAST_TERM_MAGNITUDE_DECIMAL", decimal(rep.last_term_magnitude))
    emit("DIVERGING", rep.diverging)
    if args.z > 0:
        root = solve_x_plus_xk(args.k, args.z, Fraction(1, 10 ** 30))
        target = root ** args.N
        emit_interval("BISECTION_X_POW_N", target)
        dist = max(abs(rep.value - target.lo), abs(rep.value - target.hi))
        emit("DISTANCE_DECIMAL", decimal(dist, 6))
    return 0


def cmd_scan(args) -> int:
    if not 1 <= args.r < args.k:
        raise UsageError("scan needs k > r >= 1")
    bits = args.precision_bits or default_precision()
    res = inequality_scan(alpha_new(args.k, args.r), args.grid, bits)
    emit("K", res.k)
    emit("R", res.r)
    emit("GRID", res.grid)
    emit("PRECISION_BITS", res.precision_bits)
    emit("MIN_LOWER_BOUND", res.min_lower_bound)
    emit("MIN_LOWER_BOUND_DECIMAL", decimal(res.min_lower_bound, 6))
    emit("ZERO_CELLS", ",".join(str(i) for i in res.zero_cells))
    if args.out:
        Path(args.out).write_text(res.to_json() + "\n", encoding="utf-8")
        emit("REPORT", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entropy-cert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="certify the inequality for the exponent k/r")
    p.add_argument("--k", type=_positive_int)
    p.add_argument("--r", type=_positive_int)
    p.add_argument("--pairs", help="file with one 'k r' pair per line")
    p.add_argument("--out", help="certificate path (a directory with --pairs)")
    p.add_argument("--precision-bits", type=_positive_int)
    p.add_argument("--max-refinements", type=_positive_int, default=64)
    p.add_argument("--grid", type=_positive_int, default=64, help="initial witness grid")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hpoly", help="coefficients of the entropy polynomial")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int, required=True)
    p.add_argument("--length", type=_positive_int)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_hpoly)

    p = sub.add_parser("alpha", help="enclosure of alpha_{k/r}")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int, default=1)
    p.add_argument("--width", type=_rational, default=Fraction(1, 10 ** 12))
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("identities", help="run exact identity suites")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--kmax", type=_positive_int, default=6)
    p.add_argument("--rmax", type=_positive_int)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("asymptotics", help="alpha_k against (log k - b_k)/k")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--precision-bits", type=_positive_int)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("lagrange", help="partial sums of the series for x(z)^N, x + x^k = z")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--z", type=_rational, required=True)
    p.add_argument("--terms", type=_positive_int, default=60)
    p.set_defaults(func=cmd_lagrange)

    p = sub.add_parser("scan", help="certified lower bounds of f on a grid")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int, required=True)
    p.add_argument("--grid", type=_positive_int, default=1000)
    p.add_argument("--precision-bits", type=_positive_int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"entropy-cert: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"entropy-cert: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
