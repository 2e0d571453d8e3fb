"""The scaling constant alpha_{k/r} as a bracketed algebraic number.

``alpha`` is the root in ``(0, 1)`` of ``A(t) = t^r (1+t)^(k-r) - 1``.  It is
never materialized as a float: every consumer works with the rational
enclosure and refines it by exact bisection when a sign is undecided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .exact import Interval, Rational, binomial, interval_log, interval_root
from .poly import RationalPolynomial

# above this exponent sign tests go through log enclosures instead of exact powers
_EXACT_SIGN_MAX_K = 400


class BracketError(RuntimeError):
    """The defining polynomial failed to change sign across the bracket."""


@dataclass(frozen=True)
class AlphaAlgebraic:
    k: int
    r: int
    enclosure: Interval
    refinements: int = field(default=0, compare=False)

    @cached_property
    def defining(self) -> RationalPolynomial:
        """``t^r (1+t)^(k-r) - 1`` as a dense polynomial."""
        m = self.k - self.r
        coeffs = [Fraction(0)] * (self.k + 1)
        for i in range(m + 1):
            coeffs[self.r + i] = Fraction(math.comb(m, i))
        coeffs[0] -= 1
        return RationalPolynomial(coeffs)

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.k, self.r)

    def sign_at(self, t: Rational) -> int:
        """Exact sign of ``A(t)`` for rational ``t > 0``."""
        return defining_sign(self.k, self.r, Fraction(t))

    def refine(self, target_width: Rational) -> "AlphaAlgebraic":
        return alpha_refine(self, target_width)


def defining_sign(k: int, r: int, t: Fraction) -> int:
    if t <= 0:
        raise ValueError("sign test needs t > 0")
    if k <= _EXACT_SIGN_MAX_K:
        v = t ** r * (1 + t) ** (k - r)
        return (v > 1) - (v < 1)
    # sign of r log t + (k - r) log(1 + t)
    for bits in (64, 128, 256, 512, 1024):
        s = r * interval_log(t, bits) + (k - r) * interval_log(1 + t, bits)
        if s.sign():
            return s.sign()
    v = t ** r * (1 + t) ** (k - r)
    return (v > 1) - (v < 1)


def alpha_new(k: int, r: int = 1) -> AlphaAlgebraic:
    """Bracket alpha_{k/r} in ``(r/k, 1)``; the pair is reduced to lowest terms."""
    if r < 1 or k <= r:
        raise ValueError("alpha needs k > r >= 1")
    g = math.gcd(k, r)
    k, r = k // g, r // g
    lo, hi = Fraction(r, k), Fraction(1)
    if defining_sign(k, r, lo) >= 0 or defining_sign(k, r, hi) <= 0:
        raise BracketError(f"no sign change of the defining polynomial on [{lo}, {hi}]")
    return AlphaAlgebraic(k, r, Interval(lo, hi))


def alpha_refine(a: AlphaAlgebraic, target_width: Rational) -> AlphaAlgebraic:
    """Midpoint bisection until the enclosure is at most ``target_width`` wide."""
    target_width = Fraction(target_width)
    if target_width <= 0:
        raise ValueError("target width must be positive")
    lo, hi = a.enclosure.lo, a.enclosure.hi
    steps = 0
    while hi - lo > target_width:
        m = (lo + hi) / 2
        s = defining_sign(a.k, a.r, m)
        if s == 0:
            lo = hi = m
            break
        if s < 0:
            lo = m
        else:
            hi = m
        steps += 1
    if steps == 0:
        return a
    return AlphaAlgebraic(a.k, a.r, Interval(lo, hi), a.refinements + steps)


def functional_residual(a: AlphaAlgebraic) -> Interval:
    """Interval value of ``alpha^r (1+alpha)^(k-r)`` over the enclosure; contains 1."""
    e = a.enclosure
    return e ** a.r * (1 + e) ** (a.k - a.r)


def x_equality_point(a: AlphaAlgebraic, precision_bits: int = 256) -> Interval:
    """Enclosure of ``(1/(1+alpha))^(1/r)``, the interior equality point."""
    a = alpha_refine(a, Fraction(1, 1 << (precision_bits + 8)))
    u = (1 + a.enclosure).reciprocal()
    return interval_root(u, a.r, precision_bits + 8)


def _b_residual(b: Fraction, log_k: Interval, loglog_k: Interval, bits: int) -> Interval:
    return b - interval_log(1 - b / log_k, bits) - loglog_k


def b_solver(k: int, precision_bits: int = 128) -> Interval:
    """Enclose the root of ``b - log(1 - b/log k) = log log k`` in ``(0, min(2 loglog k, log k))``."""
    if k < 3:
        raise ValueError("b_k needs k >= 3 so that log log k > 0")
    bits = precision_bits + 24
    log_k = interval_log(k, bits)
    loglog_k = interval_log(log_k, bits)
    lo = Fraction(0)
    hi = min(2 * loglog_k.hi, log_k.lo)
    hi = Fraction(math.floor(hi * (1 << bits)), 1 << bits)
    target = Fraction(1, 1 << precision_bits)
    while hi - lo > target:
        m = (lo + hi) / 2
        g = _b_residual(m, log_k, loglog_k, bits)
        if g.sign() > 0:
            hi = m
        elif g.sign() < 0:
            lo = m
        else:
            # the residual has slope >= 1, so the root lies within |g| of m
            slack = max(-g.lo, g.hi)
            return Interval(max(lo, m - slack), min(hi, m + slack))
    return Interval(lo, hi)


def alpha_asymptotic_gap(k: int, precision_bits: int = 128) -> Interval:
    """Enclosure of ``|alpha_k - (log k - b_k)/k|``."""
    b = b_solver(k, precision_bits)
    a = alpha_refine(alpha_new(k, 1), Fraction(1, 1 << precision_bits))
    estimate = (interval_log(k, precision_bits) - b) / k
    return (a.enclosure - estimate).abs()


# ---------------------------------------------------------------------------
# Lagrange inversion series for x(z) solving x + x^k = z


def lagrange_term(k: int, N: int, z: Fraction, j: int) -> Fraction:
    e = (k - 1) * j + N
    return (-1) ** j * Fraction(N, e) * binomial(k * j + N - 1, j) * z ** e


@dataclass(frozen=True)
class LagrangeReport:
    value: Fraction
    last_term_magnitude: Fraction
    magnitudes: tuple[Fraction, ...]

    @property
    def diverging(self) -> bool:
        """Term magnitudes strictly increase over the final 10 terms."""
        tail = self.magnitudes[-10:]
        return len(tail) >= 2 and all(x < y for x, y in zip(tail, tail[1:]))


def lagrange_partial_sum(k: int, N: int, z: Rational, terms: int) -> tuple[Fraction, Fraction]:
    """Partial sum of the series for ``x(z)^N`` and the magnitude of its last term."""
    rep = lagrange_report(k, N, z, terms)
    return rep.value, rep.last_term_magnitude


def lagrange_report(k: int, N: int, z: Rational, terms: int) -> LagrangeReport:
    if terms < 1:
        raise ValueError("need at least one term")
    if k < 2 or N < 1:
        raise ValueError("need k >= 2 and N >= 1")
    z = Fraction(z)
    total = Fraction(0)
    mags = []
    for j in range(terms):
        t = lagrange_term(k, N, z, j)
        total += t
        mags.append(abs(t))
    return LagrangeReport(total, mags[-1], tuple(mags))


def lagrange_radius(k: int) -> float:
    """Convergence radius ``k^(-1/(k-1)) (k-1)/k`` of the series in ``z``."""
    return k ** (-1 / (k - 1)) * (k - 1) / k


def solve_x_plus_xk(k: int, z: Rational, width: Rational) -> Interval:
    """Bisection enclosure of the root in ``[0, z]`` of ``x + x^k = z`` for ``z > 0``."""
    z = Fraction(z)
    lo, hi = Fraction(0), z
    while hi - lo > width:
        m = (lo + hi) / 2
        if m + m ** k < z:
            lo = m
        else:
            hi = m
    return Interval(lo, hi)
