"""Certification of the two-root property of the conjecture polynomial

    p_{k,r}(x) = alpha k (1-x^r)^k h_{k,k}(x) - r (1-x^k)^k h_{k,r}(x)

and the resulting verdict certificate.

The argument has two halves that must both hold.  After the substitution
``x = 1/(1+y)`` the coefficient signs of ``p`` have exactly two changes, so
Descartes allows 0 or 2 roots in (0, 1).  Three points with certified
alternating signs of ``p`` force at least 2.  Together they give exactly two.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import jsonschema

from .alpha import AlphaAlgebraic, BracketError, alpha_new, alpha_refine, defining_sign
from .combinatorics import h_poly
from .exact import Interval, format_rational, parse_rational
from .poly import (
    AlphaLinearPolynomial,
    RationalPolynomial,
    descartes_sign_changes,
    exact_divide,
    mobius_reversal,
)

SCHEMA_ID = "entropy-cert/1"
CERTIFIED, INCONCLUSIVE, REFUTED = "CERTIFIED", "INCONCLUSIVE", "REFUTED"

# alpha widths 2^-64, 2^-128, ..., 2^-4096
_SCHEDULE = tuple(64 << i for i in range(7))

# known root locations used to place the (3, 2) witnesses
DEFAULT_HINTS = {(3, 2): (Fraction(204863, 10 ** 6), Fraction(74186, 10 ** 5))}


class Inconclusive(RuntimeError):
    """A sign could not be decided within the refinement budget."""


def reduce_pair(k: int, r: int) -> tuple[int, int]:
    if r < 1 or k < r:
        raise ValueError("need k >= r >= 1")
    g = math.gcd(k, r)
    return k // g, r // g


def p_degree(k: int, r: int) -> int:
    return k * k + k * r - r


def build_p(k: int, r: int) -> AlphaLinearPolynomial:
    """``p_{k,r}`` as ``a(x) + alpha b(x)``; the pair is reduced first."""
    k, r = reduce_pair(k, r)
    if k == r:
        raise ValueError("p_{k,r} needs k > r")
    b = h_poly(k, k).as_polynomial() * RationalPolynomial.one_minus_x_pow(r) ** k * k
    a = h_poly(k, r).as_polynomial() * RationalPolynomial.one_minus_x_pow(k) ** k * (-r)
    return AlphaLinearPolynomial.from_parts(a, b)


def _pair_sign(a: Fraction, b: Fraction, alpha: Interval) -> int:
    if b == 0:
        return (a > 0) - (a < 0)
    return (a + b * alpha).sign()


def _schedule(max_refinements: int) -> tuple[int, ...]:
    return _SCHEDULE[: max(1, min(max_refinements, len(_SCHEDULE)))]


def coefficient_signs(
    p: AlphaLinearPolynomial, a: AlphaAlgebraic, max_refinements: int = 64
) -> tuple[str, AlphaAlgebraic]:
    """Certified sign string of the coefficients of ``p`` (low degree first).

    Alpha is refined along the doubling schedule until every coefficient
    interval excludes 0.  Raises :class:`Inconclusive` if one still straddles
    0 at the end of the schedule.
    """
    if p.is_zero():
        raise ValueError("p must be nonzero")
    for bits in _schedule(max_refinements):
        a = alpha_refine(a, Fraction(1, 1 << bits))
        signs = []
        undecided = False
        for ca, cb in p.coefficients:
            s = _pair_sign(ca, cb, a.enclosure)
            if s == 0 and (ca, cb) != (0, 0):
                undecided = True
                break
            signs.append(s)
        if not undecided:
            return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in signs), a
    raise Inconclusive(f"a coefficient straddles 0 at alpha width 2^-{bits}")


@dataclass(frozen=True)
class SignReport:
    transformed: AlphaLinearPolynomial
    signs: str
    count: int
    alpha: AlphaAlgebraic


def certify_sign_changes(
    p: AlphaLinearPolynomial, a: AlphaAlgebraic, max_refinements: int = 64, degree: int | None = None
) -> SignReport:
    """Signs and Descartes count of ``(1+y)^d p(1/(1+y))``."""
    d = p_degree(a.k, a.r) if degree is None else degree
    t = mobius_reversal(p, d)
    signs, a = coefficient_signs(t, a, max_refinements)
    return SignReport(t, signs, descartes_sign_changes(signs), a)


# ---------------------------------------------------------------------------
# root witnesses


def _point_sign(p: AlphaLinearPolynomial, x: Fraction, a: AlphaAlgebraic, max_refinements: int):
    ea, eb = p.evaluate_pair(x)
    for bits in _schedule(max_refinements):
        a = alpha_refine(a, Fraction(1, 1 << bits))
        s = _pair_sign(ea, eb, a.enclosure)
        if s:
            return s, a
        if eb == 0:
            break
    return 0, a


def _alternation(points, p, a, max_refinements):
    """Greedy longest alternating subsequence of certified signs at ``points``."""
    chosen: list[tuple[Fraction, int]] = []
    for x in points:
        s, a = _point_sign(p, x, a, max_refinements)
        if s == 0:
            continue
        if not chosen or chosen[-1][1] != s:
            chosen.append((x, s))
    return chosen, a


def _grid(n: int) -> list[Fraction]:
    return [Fraction(i, n) for i in range(1, n)]


@dataclass(frozen=True)
class RootWitnesses:
    points: tuple[tuple[Fraction, int], ...]
    brackets: tuple[Interval, ...]
    alpha: AlphaAlgebraic
    alternations: int = field(default=2)


def _sharpen(p, lo, s_lo, hi, a, width, max_refinements):
    while hi - lo > width:
        m = (lo + hi) / 2
        s, a = _point_sign(p, m, a, max_refinements)
        if s == 0:
            break
        if s == s_lo:
            lo = m
        else:
            hi = m
    return Interval(lo, hi), a


def locate_two_roots(
    p: AlphaLinearPolynomial,
    a: AlphaAlgebraic,
    hints: Sequence[Fraction] | None = None,
    grid: int = 64,
    max_grid: int = 4096,
    bracket_width: Fraction = Fraction(1, 4096),
    max_refinements: int = 64,
) -> RootWitnesses:
    """Three points ``u < v < w`` in (0, 1) with certified alternating signs of ``p``.

    Hint points, if given, are tried first by placing candidates between
    them; otherwise (or if that fails) a uniform grid is refined from ``grid``
    up to ``max_grid`` points.  The two sign-change brackets are then
    sharpened by bisection to ``bracket_width``.
    """
    chosen: list[tuple[Fraction, int]] = []
    if hints:
        hs = sorted(Fraction(h) for h in hints)
        cands = [hs[0] / 2] + [(x + y) / 2 for x, y in zip(hs, hs[1:])] + [(hs[-1] + 1) / 2]
        chosen, a = _alternation(cands, p, a, max_refinements)
    n = grid
    while len(chosen) < 3 and n <= max_grid:
        chosen, a = _alternation(_grid(n), p, a, max_refinements)
        n *= 2
    if len(chosen) < 3:
        raise Inconclusive("no two sign alternations of p found on the grid")
    brackets = []
    for (x0, s0), (x1, _) in zip(chosen[:3], chosen[1:3]):
        br, a = _sharpen(p, x0, s0, x1, a, bracket_width, max_refinements)
        brackets.append(br)
    return RootWitnesses(tuple(chosen[:3]), tuple(brackets), a, len(chosen) - 1)


def count_alternations(p: AlphaLinearPolynomial, a: AlphaAlgebraic, grid: int = 4096) -> int:
    chosen, _ = _alternation(_grid(grid), p, a, 64)
    return max(0, len(chosen) - 1)


def divisibility_check(k: int, r: int) -> bool:
    p = build_p(k, r)
    _, rem = exact_divide(p, RationalPolynomial([1, -1]) ** reduce_pair(k, r)[0])
    return rem.is_zero()


# ---------------------------------------------------------------------------
# certificate


@dataclass
class Certificate:
    k: int
    r: int
    alpha: AlphaAlgebraic | None
    p_degree: int
    transformed: AlphaLinearPolynomial
    signs: str
    descartes_count: int
    witnesses: tuple[tuple[Fraction, int], ...]
    divisible: bool
    verdict: str
    refinements_used: int
    root_brackets: tuple[Interval, ...] = ()
    diagnostics: str = ""

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.k, self.r)

    @property
    def trivial(self) -> bool:
        return self.k == self.r

    def defining_poly(self) -> RationalPolynomial:
        if self.alpha is None:
            return RationalPolynomial([-1, 1])
        return self.alpha.defining

    def alpha_interval(self) -> Interval:
        return Interval(1) if self.alpha is None else self.alpha.enclosure

    def to_dict(self) -> dict:
        enc = self.alpha_interval()
        out = {
            "schema": SCHEMA_ID,
            "k": self.k,
            "r": self.r,
            "exponent": f"{self.k}/{self.r}",
            "alpha": {
                "defining": self.defining_poly().to_json(),
                "lo": format_rational(enc.lo),
                "hi": format_rational(enc.hi),
            },
            "p_degree": self.p_degree,
            "transformed_coefficients": self.transformed.to_json(),
            "signs": self.signs,
            "descartes_count": self.descartes_count,
            "witnesses": [
                {"x": format_rational(x), "sign": "+" if s > 0 else "-"} for x, s in self.witnesses
            ],
            "divisible_by_one_minus_x_pow_k": self.divisible,
            "verdict": self.verdict,
            "refinements": self.refinements_used,
            "root_brackets": [[format_rational(b.lo), format_rational(b.hi)] for b in self.root_brackets],
        }
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class VerifyConfig:
    precision_bits: int = 256
    max_refinements: int = 64
    grid: int = 64
    hints: tuple[Fraction, ...] | None = None


def _trivial_certificate(k: int, r: int) -> Certificate:
    return Certificate(k, r, None, p_degree(1, 1), AlphaLinearPolynomial(), "", 0, (), True, CERTIFIED, 0)


def verify_exponent(k: int, r: int, config: VerifyConfig | None = None) -> Certificate:
    """Run the full pipeline for the exponent ``k/r``.

    Never raises on arithmetic trouble: failures come back as an
    INCONCLUSIVE certificate carrying a diagnostic.
    """
    config = config or VerifyConfig()
    k, r = reduce_pair(k, r)
    if k == r:
        return _trivial_certificate(k, r)
    d = p_degree(k, r)
    try:
        a = alpha_new(k, r)
    except BracketError as exc:
        return Certificate(k, r, None, d, AlphaLinearPolynomial(), "", 0, (), False, INCONCLUSIVE, 0, (), str(exc))
    p = build_p(k, r)
    divisible = divisibility_check(k, r)
    transformed = mobius_reversal(p, d)

    def cert(verdict, signs="", count=0, wit=(), brackets=(), note=""):
        return Certificate(
            k, r, a, d, transformed, signs, count, wit, divisible, verdict, a.refinements, brackets, note
        )

    try:
        report = certify_sign_changes(p, a, config.max_refinements, d)
    except Inconclusive as exc:
        return cert(INCONCLUSIVE, note=str(exc))
    a = report.alpha
    signs, count = report.signs, report.count
    if count < 2:
        # at most one root in (0, 1), incompatible with exactly two
        return cert(REFUTED, signs, count, note=f"Descartes count {count}")
    hints = config.hints if config.hints is not None else DEFAULT_HINTS.get((k, r))
    try:
        found = locate_two_roots(p, a, hints, config.grid, max_refinements=config.max_refinements)
    except Inconclusive as exc:
        return cert(INCONCLUSIVE, signs, count, note=str(exc))
    a = found.alpha
    if count > 2:
        many = count_alternations(p, a)
        if many >= 3:
            return cert(REFUTED, signs, count, found.points, found.brackets, f"{many} certified sign changes of p")
        return cert(INCONCLUSIVE, signs, count, found.points, found.brackets, f"Descartes count {count}")
    if not divisible:
        return cert(INCONCLUSIVE, signs, count, found.points, found.brackets, "divisibility by (1-x)^k failed")
    # record the enclosure at the requested precision; signs stay certified
    # because refinement only shrinks the interval
    a = alpha_refine(a, Fraction(1, 1 << config.precision_bits))
    return cert(CERTIFIED, signs, count, found.points, found.brackets)


def emit_certificate(c: Certificate, path: str | os.PathLike) -> Path:
    """Write the certificate atomically (temporary file, then rename)."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=".cert-", suffix=".json", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(c.dumps())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


_RAT = {"type": "string", "pattern": r"^-?\d+/\d+$"}

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": [
        "schema", "k", "r", "exponent", "alpha", "p_degree", "transformed_coefficients",
        "signs", "descartes_count", "witnesses", "divisible_by_one_minus_x_pow_k",
        "verdict", "refinements",
    ],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "k": {"type": "integer", "minimum": 1},
        "r": {"type": "integer", "minimum": 1},
        "exponent": {"type": "string", "pattern": r"^\d+/\d+$"},
        "alpha": {
            "type": "object",
            "required": ["defining", "lo", "hi"],
            "properties": {"defining": {"type": "array", "items": _RAT}, "lo": _RAT, "hi": _RAT},
        },
        "p_degree": {"type": "integer"},
        "transformed_coefficients": {
            "type": "array",
            "items": {"type": "array", "items": _RAT, "minItems": 2, "maxItems": 2},
        },
        "signs": {"type": "string", "pattern": r"^[+\-0]*$"},
        "descartes_count": {"type": "integer", "minimum": 0},
        "witnesses": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["x", "sign"],
                "properties": {"x": _RAT, "sign": {"enum": ["+", "-"]}},
            },
        },
        "divisible_by_one_minus_x_pow_k": {"type": "boolean"},
        "verdict": {"enum": [CERTIFIED, INCONCLUSIVE, REFUTED]},
        "refinements": {"type": "integer", "minimum": 0},
        "root_brackets": {"type": "array", "items": {"type": "array", "items": _RAT}},
    },
}


class CertificateError(ValueError):
    pass


def validate_certificate(data: dict) -> str:
    """Schema check plus full recomputation; returns the verdict or raises
    :class:`CertificateError`."""
    try:
        jsonschema.validate(data, CERTIFICATE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise CertificateError(f"schema: {exc.message}") from exc

    def need(cond: bool, msg: str) -> None:
        if not cond:
            raise CertificateError(msg)

    k, r = data["k"], data["r"]
    need(math.gcd(k, r) == 1 and k >= r, "exponent not reduced")
    need(data["exponent"] == f"{k}/{r}", "exponent mismatch")
    need(data["p_degree"] == p_degree(k, r), "degree mismatch")
    verdict = data["verdict"]
    lo, hi = parse_rational(data["alpha"]["lo"]), parse_rational(data["alpha"]["hi"])
    defining = RationalPolynomial.from_json(data["alpha"]["defining"])

    if k == r:
        need(defining == RationalPolynomial([-1, 1]) and lo == hi == 1, "trivial alpha mismatch")
        need(verdict == CERTIFIED, "trivial exponent must be certified")
        return verdict

    need(lo <= hi, "empty alpha enclosure")
    ref = alpha_new(k, r)
    need(defining == ref.defining, "defining polynomial mismatch")
    if lo == hi:
        need(defining_sign(k, r, lo) == 0, "alpha point is not a root")
    else:
        need(defining_sign(k, r, lo) < 0 < defining_sign(k, r, hi), "alpha bracket has no sign change")
    alpha = Interval(lo, hi)

    transformed = AlphaLinearPolynomial.from_json(data["transformed_coefficients"])
    need(transformed == mobius_reversal(build_p(k, r), p_degree(k, r)), "transformed coefficients mismatch")
    need(data["divisible_by_one_minus_x_pow_k"] == divisibility_check(k, r), "divisibility flag mismatch")

    if data["signs"]:
        need(len(data["signs"]) == len(transformed), "sign string length mismatch")
        for ch, (ca, cb) in zip(data["signs"], transformed.coefficients):
            s = _pair_sign(ca, cb, alpha)
            need(s != 0 or (ca, cb) == (0, 0), "recorded sign is not certified at the enclosure")
            need(ch == "+-0"[(1, -1, 0).index(s)], "recorded sign does not reproduce")
        need(descartes_sign_changes(data["signs"]) == data["descartes_count"], "Descartes count mismatch")

    prev = None
    for w in data["witnesses"]:
        x = parse_rational(w["x"])
        need(0 < x < 1, "witness outside (0, 1)")
        need(prev is None or prev < x, "witnesses not increasing")
        prev = x
        # sign p(x) = sign of the transform at y = (1-x)/x
        s = transformed.evaluate((1 - x) / x, alpha).sign()
        need(s == (1 if w["sign"] == "+" else -1), "witness sign does not reproduce")

    if verdict == CERTIFIED:
        need(data["descartes_count"] == 2, "certified verdict needs Descartes count 2")
        wit = [w["sign"] for w in data["witnesses"]]
        need(len(wit) == 3 and wit[0] != wit[1] != wit[2], "certified verdict needs three alternating witnesses")
        need(data["divisible_by_one_minus_x_pow_k"], "certified verdict needs divisibility")
    return verdict


def load_certificate(path: str | os.PathLike) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    validate_certificate(data)
    return data
