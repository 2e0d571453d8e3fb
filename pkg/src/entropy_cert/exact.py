"""Exact scalars, rational intervals and rigorous log/entropy enclosures.

Every scalar is a :class:`fractions.Fraction`.  Intervals carry exact rational
endpoints, so interval arithmetic needs no rounding mode; the only inexact
step is the evaluation of ``log``, whose enclosure is built from a fixed-point
``atanh`` series with an explicit error budget and rounded outward.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Rational = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^(-?\d+)/(\d+)$")


def Q(value, den: int = 1) -> Fraction:
    """Shorthand constructor: ``Q(3, 4)``, ``Q("3/4")``, ``Q(2)``."""
    if isinstance(value, str):
        return parse_rational(value, strict=False)
    return Fraction(value, den)


def format_rational(x: Rational) -> str:
    """Serialize as ``"num/den"`` with a positive denominator, always canonical."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str, strict: bool = True) -> Fraction:
    """Inverse of :func:`format_rational`.

    With ``strict`` the string must be exactly canonical ``num/den``; otherwise
    anything :class:`Fraction` accepts (``"1e-6"``, ``"3"``, ``"0.25"``) is allowed.
    """
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        if strict:
            raise ValueError(f"not a num/den rational: {text!r}")
        return Fraction(text.strip())
    num, den = int(m.group(1)), int(m.group(2))
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    value = Fraction(num, den)
    if strict and (value.numerator != num or value.denominator != den):
        raise ValueError(f"rational not in canonical form: {text!r}")
    return value


def binomial(n: int, k: int) -> int:
    """Binomial coefficient for any integer ``n`` and ``k >= 0``.

    Negative upper index uses ``binom(-n, k) = (-1)^k binom(n+k-1, k)``, which
    agrees with the falling-factorial polynomial ``n(n-1)...(n-k+1)/k!``.
    """
    if k < 0:
        raise ValueError("binomial lower index must be non-negative")
    if n >= 0:
        return math.comb(n, k)
    sign = -1 if k % 2 else 1
    return sign * math.comb(-n + k - 1, k)


def scaled_pochhammer(z: Rational, step: Rational, n: int) -> Fraction:
    """``z (z - step) (z - 2 step) ... (z - (n-1) step)``; the empty product is 1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    z, step = Fraction(z), Fraction(step)
    out = Fraction(1)
    for i in range(n):
        out *= z - i * step
    return out


def rational_binomial(x: Rational, n: int) -> Fraction:
    """``x(x-1)...(x-n+1)/n!`` for rational ``x``."""
    return scaled_pochhammer(x, 1, n) / math.factorial(n)


def _round_down(x: Fraction, bits: int) -> Fraction:
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def _round_up(x: Fraction, bits: int) -> Fraction:
    return Fraction(-((-x.numerator << bits) // x.denominator), 1 << bits)


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __init__(self, lo: Rational, hi: Rational | None = None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @staticmethod
    def coerce(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval(x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def sign(self) -> int:
        """+1 or -1 when the interval excludes zero, 0 when undecided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def __add__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        other = Interval.coerce(other)
        if self.lo == self.hi and other.lo == other.hi:
            return Interval(self.lo * other.lo)
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval reciprocal across zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * Interval.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return Interval.coerce(other) * self.reciprocal()

    def __pow__(self, n: int) -> "Interval":
        if n < 0:
            return self.reciprocal() ** (-n)
        if n == 0:
            return Interval(1)
        a, b = self.lo ** n, self.hi ** n
        if n % 2 == 0 and self.lo <= 0 <= self.hi:
            return Interval(0, max(a, b))
        return Interval(min(a, b), max(a, b))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def round_out(self, bits: int) -> "Interval":
        """Widen to dyadic endpoints with ``bits`` fractional bits."""
        return Interval(_round_down(self.lo, bits), _round_up(self.hi, bits))

    def __repr__(self) -> str:
        return f"Interval({format_rational(self.lo)}, {format_rational(self.hi)})"

    def to_json(self) -> dict:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}


def _atanh_scaled(num: int, den: int, W: int) -> tuple[int, int]:
    """Integers ``(a, b)`` with ``a <= 2^W atanh(num/den) <= b`` for ``|num/den| <= 1/3``.

    The argument is bracketed by two W-bit fixed-point values; the series is
    summed for each with truncating integer arithmetic, whose accumulated
    error stays below ``3`` ulps per term since every power shrinks by at
    least a factor 9.
    """
    if num == 0:
        return 0, 0
    one = 1 << W
    S_lo = (num << W) // den
    S_hi = S_lo + 1
    # |s| <= 1/3 so |s|^(2N+1) < 2^-(W+4) once (2N+1) log2(3) > W + 4.
    N = (W + 4) // 3 + 2
    bounds = []
    for S in (S_lo, S_hi):
        Q2 = (S * S) >> W
        P = S
        total = 0
        for n in range(N):
            total += P // (2 * n + 1)
            P = (P * Q2) >> W
        bounds.append(total)
    # truncation error + series tail, both in ulps
    slack = 4 * N + 4
    s_abs = max(abs(Fraction(S_lo, one)), abs(Fraction(S_hi, one)))
    tail = s_abs ** (2 * N + 1) / ((2 * N + 1) * (1 - s_abs * s_abs))
    slack += math.ceil(tail * one)
    return bounds[0] - slack, bounds[1] + slack


@lru_cache(maxsize=64)
def _log2_scaled(W: int) -> tuple[int, int]:
    a, b = _atanh_scaled(1, 3, W)
    return 2 * a, 2 * b


def _log_point(x: Fraction, W: int) -> tuple[int, int, int]:
    """Scaled bounds of ``log x`` for rational ``x > 0``; returns ``(lo, hi, W)``."""
    e = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / Fraction(2) ** e
    while y > Fraction(3, 2):
        y /= 2
        e += 1
    while y <= Fraction(3, 4):
        y *= 2
        e -= 1
    W = W + abs(e).bit_length()
    s = (y - 1) / (y + 1)
    a, b = _atanh_scaled(s.numerator, s.denominator, W)
    lo, hi = 2 * a, 2 * b
    if e:
        l2a, l2b = _log2_scaled(W)
        if e > 0:
            lo, hi = lo + e * l2a, hi + e * l2b
        else:
            lo, hi = lo + e * l2b, hi + e * l2a
    return lo, hi, W


def interval_log(x, precision_bits: int = 256) -> Interval:
    """Enclosure of ``{log t : t in x}`` for a positive rational or interval ``x``.

    The returned width is far below ``2^-precision_bits * max(1, |log lo|)``.
    """
    if precision_bits < 16:
        raise ValueError("precision_bits must be at least 16")
    x = Interval.coerce(x)
    if x.lo <= 0:
        raise ValueError("log is only defined for intervals with lo > 0")
    W = precision_bits + 32
    if x.lo == 1 and x.hi == 1:
        return Interval(0)
    lo, hi, W1 = _log_point(x.lo, W)
    W2 = W1
    if x.hi != x.lo:
        _, hi, W2 = _log_point(x.hi, W)
    return Interval(Fraction(lo, 1 << W1), Fraction(hi, 1 << W2))


def _entropy_point(t: Fraction, precision_bits: int) -> Interval:
    if t == 0 or t == 1:
        return Interval(0)
    u = 1 - t
    h = -(t * interval_log(t, precision_bits)) - u * interval_log(u, precision_bits)
    h = h.round_out(precision_bits + 32)
    # H(t) >= 0 on [0, 1]
    return Interval(max(h.lo, Fraction(0)), h.hi)


def interval_entropy(x, precision_bits: int = 256) -> Interval:
    """Enclosure of the binary entropy ``H(t) = -t log t - (1-t) log(1-t)`` over ``x``.

    Uses that ``H`` increases on ``[0, 1/2]`` and decreases on ``[1/2, 1]``, so
    the range over an interval is determined by endpoint values and, if the
    interval contains it, the maximum ``H(1/2) = log 2``.  ``H(0) = H(1) = 0``.
    """
    x = Interval.coerce(x)
    if x.lo < 0 or x.hi > 1:
        raise ValueError("entropy argument must lie in [0, 1]")
    a = _entropy_point(x.lo, precision_bits)
    if x.lo == x.hi:
        return a
    b = _entropy_point(x.hi, precision_bits)
    lo = min(a.lo, b.lo)
    half = Fraction(1, 2)
    if x.lo <= half <= x.hi:
        hi = _entropy_point(half, precision_bits).hi
    elif x.hi < half:
        hi = b.hi
    else:
        hi = a.hi
    return Interval(lo, hi)


def _iroot_floor(n: int, r: int) -> int:
    """Largest integer ``a >= 0`` with ``a^r <= n``, by bisection."""
    if n < 0:
        raise ValueError("root of a negative number")
    lo, hi = 0, 1 << (n.bit_length() // r + 1)
    while lo < hi:
        m = (lo + hi + 1) // 2
        if m ** r <= n:
            lo = m
        else:
            hi = m - 1
    return lo


def interval_root(x, r: int, bits: int) -> Interval:
    """Enclosure of ``t^(1/r)`` over a non-negative interval, dyadic to ``bits`` bits."""
    x = Interval.coerce(x)
    if x.lo < 0:
        raise ValueError("root of a negative interval")
    if r == 1:
        return x
    scale = 1 << (r * bits)
    lo_int = _iroot_floor((x.lo.numerator * scale) // x.lo.denominator, r)
    n_hi = -((-x.hi.numerator * scale) // x.hi.denominator)
    hi_int = _iroot_floor(n_hi, r)
    if hi_int ** r < n_hi:
        hi_int += 1
    return Interval(Fraction(lo_int, 1 << bits), Fraction(hi_int, 1 << bits))
