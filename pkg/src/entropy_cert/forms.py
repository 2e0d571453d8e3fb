"""Closed forms of the (k+1)-st derivative of x^(k-r) H(x^r), their exact
cross-identities, and certified evaluation of

    f_{k,r}(x) = alpha H(x^k) - x^(k-r) H(x^r).

The derivative itself is never formed symbolically.  Its three expansions
(series, rational, generalized-Stirling basis) are evaluated independently
and compared, and the polynomial identities linking them are checked
coefficient by coefficient in exact arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .alpha import AlphaAlgebraic, alpha_refine, x_equality_point
from .combinatorics import (
    StirlingParams,
    gen_eulerian,
    gen_stirling,
    h_coeff,
    h_poly,
    s_binomial,
)
from .exact import Interval, Rational, binomial, format_rational, interval_entropy, interval_log
from .poly import RationalPolynomial


class TruncationTooSmall(ValueError):
    pass


# ---------------------------------------------------------------------------
# the entropy series and the three derivative forms


def fund_series_eval(k: int, r: int, x: Rational, precision_bits: int = 128, max_terms: int = 4000) -> Interval:
    """Enclose ``x^(k-r) H(x^r)`` via ``-r x^k log x + x^k - sum_l x^(k+rl)/(l(l+1))``."""
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1)")
    W = precision_bits + 16
    scale = 1 << W
    xr = x ** r
    target = Fraction(1, scale)
    term_pow = x ** k * xr  # x^(k + r l) at l = 1
    lo_sum = hi_sum = 0
    M = 0
    for l in range(1, max_terms + 1):
        t = term_pow / (l * (l + 1))
        n = t.numerator * scale
        lo_sum += n // t.denominator
        hi_sum += -((-n) // t.denominator)
        M = l
        term_pow *= xr
        # tail after index M is below x^(k+r(M+1)) / ((M+1)(M+2)(1-x^r))
        if term_pow / ((l + 1) * (l + 2) * (1 - xr)) < target:
            break
    tail = term_pow / ((M + 1) * (M + 2) * (1 - xr))
    series = Interval(Fraction(lo_sum, scale), Fraction(hi_sum, scale) + tail)
    xk = x ** k
    return -r * xk * interval_log(x, precision_bits) + xk - series


def scaled_entropy(k: int, r: int, x, precision_bits: int = 128) -> Interval:
    """Direct enclosure of ``x^(k-r) H(x^r)`` through :func:`interval_entropy`."""
    X = Interval.coerce(x)
    return X ** (k - r) * interval_entropy(X ** r, precision_bits)


def default_truncation(k: int) -> int:
    return max(4 * k, 40)


def deriv_series(k: int, r: int, x: Rational, M: int | None = None) -> Interval:
    """``-r k! sum_{l>=0} binom(k+rl, k) x^(rl-1)/(l+1)``: terms ``l <= M`` plus a
    geometric tail bound."""
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1)")
    M = default_truncation(k) if M is None else M
    xr = x ** r
    # every later term ratio is below q: the binomial ratio decreases in l
    # and (l+1)/(l+2) < 1
    q = xr * math.prod(Fraction(k + r * M + i, r * M + i) for i in range(1, r + 1))
    if q >= 1:
        raise TruncationTooSmall(f"M={M} too small: term ratio bound {float(q):.3g} >= 1")
    total = Fraction(0)
    p = Fraction(1)
    last = Fraction(0)
    for l in range(M + 1):
        last = binomial(k + r * l, k) * p / (l + 1)
        total += last
        p *= xr
    tail = last * q / (1 - q)
    c = r * math.factorial(k) / x
    return Interval(-c * (total + tail), -c * total)


def deriv_series_to_width(k: int, r: int, x: Rational, width: Rational) -> Interval:
    """Double the truncation until the enclosure is at most ``width`` wide."""
    M = default_truncation(k)
    while True:
        try:
            iv = deriv_series(k, r, x, M)
            if iv.width <= width:
                return iv
        except TruncationTooSmall:
            pass
        M *= 2


def deriv_rational(k: int, r: int, x: Rational) -> Fraction:
    """``-r k! h_{k,r}(x) / (x (1 - x^r)^k)``."""
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1)")
    if not 1 <= r <= k:
        raise ValueError("need 1 <= r <= k")
    h = h_poly(k, r).as_polynomial()
    return -r * math.factorial(k) * h(x) / (x * (1 - x ** r) ** k)


def deriv_stirling(k: int, r: int, x: Rational) -> Fraction:
    """``-sum_l l! S(k, l+1 | 1, r, k-r) r^(l+2) x^(rl-1) / (1-x^r)^(l+1)``."""
    x = Fraction(x)
    params = StirlingParams(1, r, k - r)
    xr = x ** r
    total = Fraction(0)
    for l in range(k):
        w = math.factorial(l) * gen_stirling(k, l + 1, params) * Fraction(r) ** (l + 2)
        total += w * xr ** l / (1 - xr) ** (l + 1)
    return -total / x


def cor6_closed_form(k: int, x: Rational) -> Fraction:
    """``(k-1)!/x^2 (1 - (1-x)^(-k))``, the r = 1 derivative."""
    x = Fraction(x)
    return math.factorial(k - 1) / x ** 2 * (1 - 1 / (1 - x) ** k)


@dataclass(frozen=True)
class DerivativeForms:
    k: int
    r: int
    series_truncation: int
    numerator: RationalPolynomial
    stirling_weights: tuple[tuple[int, Fraction], ...]

    def denominator(self, x: Rational) -> Fraction:
        x = Fraction(x)
        return x * (1 - x ** self.r) ** self.k


def derivative_forms(k: int, r: int, M: int | None = None) -> DerivativeForms:
    params = StirlingParams(1, r, k - r)
    weights = tuple(
        (l, math.factorial(l) * gen_stirling(k, l + 1, params) * Fraction(r) ** (l + 2)) for l in range(k)
    )
    num = h_poly(k, r).as_polynomial() * (-r * math.factorial(k))
    return DerivativeForms(k, r, default_truncation(k) if M is None else M, num, weights)


# ---------------------------------------------------------------------------
# exact identity checks


def _truncate(p: RationalPolynomial, M: int) -> RationalPolynomial:
    return RationalPolynomial(p.coefficients[: M + 1])


def stirling_identity_check(k: int, r: int) -> bool:
    """``r k! h_{k,r}(x) = sum_l l! S(k,l+1|1,r,k-r) r^(l+2) x^(rl) (1-x^r)^(k-1-l)``."""
    if not 1 <= r <= k:
        raise ValueError("need 1 <= r <= k")
    lhs = h_poly(k, r).as_polynomial() * (r * math.factorial(k))
    base = RationalPolynomial.one_minus_x_pow(r)
    rhs = RationalPolynomial()
    for l, w in derivative_forms(k, r).stirling_weights:
        rhs = rhs + RationalPolynomial.monomial(r * l, w) * base ** (k - 1 - l)
    return lhs == rhs


def termination_check(k: int, r: int, M: int) -> bool:
    """``(1-z)^k sum_{l<=M} binom(k+rl, k) z^l/(l+1)`` has the ``h_{k,r,j}`` as its
    first ``k`` coefficients and vanishing coefficients for ``k <= j <= M``."""
    if M <= k:
        raise ValueError("need M > k")
    series = RationalPolynomial(Fraction(binomial(k + r * l, k), l + 1) for l in range(M + 1))
    prod = _truncate(series * RationalPolynomial.one_minus_x_pow(1) ** k, M)
    head_ok = all(prod[j] == h_coeff(k, r, j) for j in range(k))
    return head_ok and all(prod[j] == 0 for j in range(k, M + 1))


def cor6_identity(k: int) -> bool:
    """``k x h_{k,1}(x) = 1 - (1-x)^k``."""
    h = h_poly(k, 1).as_polynomial()
    lhs = RationalPolynomial.monomial(1, k) * h
    rhs = 1 - RationalPolynomial([1, -1]) ** k
    return lhs == rhs


def cor7_checks(k: int) -> bool:
    """The r = k simplifications, all without complex arithmetic.

    * ``h_{k,k,j}`` equals the (k-1)-binomial coefficient at ``jk``;
    * every k-th coefficient of ``(1 + x + ... + x^(k-1))^k`` (the multisection)
      equals de Moivre's closed form;
    * ``(1-z)^k sum_l binom(k+kl-1, k-1) z^l`` reproduces those coefficients.
    """
    if any(h_coeff(k, k, j) != s_binomial(k, j * k, k - 1) for j in range(k)):
        return False
    gf = RationalPolynomial([1] * k) ** k
    section = [gf[k * l] for l in range(k + 1)]
    if section != [s_binomial(k, k * l, k - 1, "de_moivre") for l in range(k + 1)]:
        return False
    M = 2 * k + 2
    series = RationalPolynomial(binomial(k + k * l - 1, k - 1) for l in range(M + 1))
    prod = _truncate(series * RationalPolynomial([1, -1]) ** k, M)
    return all(prod[l] == (section[l] if l <= k else 0) for l in range(M + 1))


def stir1_checks(n: int, r: int, s: int, M: int) -> bool:
    """The two Laplace-transform identities in the variable ``z = w^r``, cleared by
    ``(1-z)^(n+1)`` and compared through order ``M``."""
    if not (r <= s <= n + r - 1):
        raise ValueError("need r <= s <= n + r - 1")
    if M <= n + 2:
        raise ValueError("need M > n + 2")
    clear = RationalPolynomial([1, -1]) ** (n + 1)
    one_minus = RationalPolynomial([1, -1])
    nf = math.factorial(n)

    plain = RationalPolynomial(binomial(r * l + s, n) for l in range(M + 1))
    lhs1 = _truncate(plain * clear, M)
    rhs1 = RationalPolynomial()
    p1 = StirlingParams(1, r, s)
    for l in range(n + 1):
        w = math.factorial(l) * gen_stirling(n, l, p1) * Fraction(r) ** l / nf
        rhs1 = rhs1 + RationalPolynomial.monomial(l, w) * one_minus ** (n - l)

    damped = RationalPolynomial(Fraction(binomial(r * l + s, n), l + 1) for l in range(M + 1))
    lhs2 = _truncate(damped * clear, M)
    rhs2 = RationalPolynomial()
    p2 = StirlingParams(1, r, s - r)
    for l in range(n):
        w = math.factorial(l) * gen_stirling(n, l + 1, p2) * Fraction(r) ** (l + 1) / nf
        rhs2 = rhs2 + RationalPolynomial.monomial(l, w) * one_minus ** (n - l)
    return lhs1 == _truncate(rhs1, M) and lhs2 == _truncate(rhs2, M)


def eulerian_transform_check(n: int, r: int, s: int, M: int) -> bool:
    """``n! sum_{l>=1} binom(rl+s, n) z^l = z (1-z)^(-(n+1)) sum_j A^{(r,s)}_{n,j} z^j``.

    Also checks the Stirling-basis middle form, whose series starts at
    ``l = 0``: ``n! sum_{l>=0} binom(rl+s, n) z^l = sum_j j! S(n,j|1,r,s) r^j z^j/(1-z)^(j+1)``.
    """
    if M <= n + 2:
        raise ValueError("need M > n + 2")
    nf = math.factorial(n)
    clear = RationalPolynomial([1, -1]) ** (n + 1)
    from_one = RationalPolynomial([0] + [nf * binomial(r * l + s, n) for l in range(1, M + 1)])
    lhs = _truncate(from_one * clear, M)
    rhs = RationalPolynomial([0] + [gen_eulerian(n, j, r, s) for j in range(n + 1)])
    if lhs != _truncate(rhs, M):
        return False
    from_zero = RationalPolynomial(nf * binomial(r * l + s, n) for l in range(M + 1))
    mid = RationalPolynomial()
    params = StirlingParams(1, r, s)
    one_minus = RationalPolynomial([1, -1])
    for j in range(n + 1):
        w = math.factorial(j) * gen_stirling(n, j, params) * Fraction(r) ** j
        mid = mid + RationalPolynomial.monomial(j, w) * one_minus ** (n - j)
    return _truncate(from_zero * clear, M) == _truncate(mid, M)


# ---------------------------------------------------------------------------
# f_{k,r} and its derivative


def _ready(a: AlphaAlgebraic, precision_bits: int) -> AlphaAlgebraic:
    return alpha_refine(a, Fraction(1, 1 << precision_bits))


def f_eval(a: AlphaAlgebraic, x, precision_bits: int = 256) -> Interval:
    """Enclose ``alpha H(x^k) - x^(k-r) H(x^r)`` at a rational point or over an interval."""
    X = Interval.coerce(x)
    if X.lo < 0 or X.hi > 1:
        raise ValueError("x must lie in [0, 1]")
    a = _ready(a, precision_bits)
    k, r = a.k, a.r
    first = a.enclosure * interval_entropy(X ** k, precision_bits)
    return first - scaled_entropy(k, r, X, precision_bits)


def _log_odds(T: Interval, bits: int) -> Interval:
    # log((1 - t)/t) = log(1/t - 1) is decreasing in t
    return interval_log(T.reciprocal() - 1, bits)


def f_deriv_eval(a: AlphaAlgebraic, x, precision_bits: int = 256) -> Interval:
    """Enclose ``f'_{k,r}`` from

        x^-(k-r-1) f' = alpha k x^r log((1-x^k)/x^k) - k x^r log((1-x^r)/x^r) + (k-r) log(1-x^r).
    """
    X = Interval.coerce(x)
    if X.lo <= 0 or X.hi >= 1:
        raise ValueError("x must lie in (0, 1)")
    a = _ready(a, precision_bits)
    k, r = a.k, a.r
    Xr, Xk = X ** r, X ** k
    bracket = (
        a.enclosure * k * Xr * _log_odds(Xk, precision_bits)
        - k * Xr * _log_odds(Xr, precision_bits)
        + (k - r) * interval_log(1 - Xr, precision_bits)
    )
    return X ** (k - r - 1) * bracket


def _cell_enclosure(a: AlphaAlgebraic, lo: Fraction, hi: Fraction, bits: int) -> Interval:
    cell = Interval(lo, hi)
    if lo == 0 or hi == 1:
        return f_eval(a, cell, bits)
    m = cell.mid
    mean_value = f_eval(a, m, bits) + f_deriv_eval(a, cell, bits) * (cell - m)
    if mean_value.lo >= 0:
        return mean_value
    return mean_value.intersect(f_eval(a, cell, bits))


@dataclass
class ScanResult:
    k: int
    r: int
    grid: int
    precision_bits: int
    min_lower_bound: Fraction
    zero_cells: list[int]
    cell_bounds: list[Interval] = field(repr=False, default_factory=list)

    @property
    def witness_subintervals(self) -> list[Interval]:
        return [Interval(Fraction(i, self.grid), Fraction(i + 1, self.grid)) for i in self.zero_cells]

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "r": self.r,
                "grid": self.grid,
                "precision_bits": self.precision_bits,
                "min_lower_bound": format_rational(self.min_lower_bound),
                "zero_cells": self.zero_cells,
            },
            indent=2,
        )


def inequality_scan(
    a: AlphaAlgebraic,
    grid: int = 1000,
    precision_bits: int = 256,
    resolve: Rational = Fraction(1, 1 << 40),
    max_depth: int = 60,
    coarse_bits: int = 64,
) -> ScanResult:
    """Certified lower bounds of ``f_{k,r}`` on each of ``grid`` equal cells of [0, 1].

    Each cell is enclosed by the mean-value form (direct range evaluation on
    cells touching 0 or 1).  A cheap low-precision pass settles cells that
    are clearly positive; any cell whose bound dips below zero is redone at
    ``precision_bits`` with bisection until its lower bound is at least
    ``-resolve`` or ``max_depth`` is reached.  A cell counts as a zero cell
    when its final enclosure contains 0.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    resolve = Fraction(resolve)
    coarse = _ready(a, min(coarse_bits, precision_bits))
    fine = _ready(a, precision_bits)
    bounds: list[Interval] = []
    for i in range(grid):
        lo, hi = Fraction(i, grid), Fraction(i + 1, grid)
        enc = _cell_enclosure(coarse, lo, hi, min(coarse_bits, precision_bits))
        if enc.lo <= 0:
            enc = _refine_cell(fine, lo, hi, precision_bits, resolve, max_depth)
        bounds.append(enc)
    zero_cells = [i for i, b in enumerate(bounds) if b.lo <= 0 <= b.hi]
    return ScanResult(
        a.k, a.r, grid, precision_bits, min(b.lo for b in bounds), zero_cells, bounds
    )


def _refine_cell(a, lo, hi, bits, resolve, max_depth) -> Interval:
    enc = _cell_enclosure(a, lo, hi, bits)
    if enc.lo >= -resolve or max_depth == 0:
        return enc
    m = (lo + hi) / 2
    left = _refine_cell(a, lo, m, bits, resolve, max_depth - 1)
    right = _refine_cell(a, m, hi, bits, resolve, max_depth - 1)
    return left.hull(right)


def zero_difference_quotients(a: AlphaAlgebraic, h: Rational, precision_bits: int = 256) -> list[Interval]:
    """Forward-difference quotients ``Delta_h^t f(0) / h^t`` for ``t = 0..k-1``.

    A root of multiplicity ``k`` at 0 makes these vanish like ``h log h``.
    """
    h = Fraction(h)
    k = a.k
    vals = [f_eval(a, j * h, precision_bits) for j in range(k)]
    out = []
    for t in range(k):
        diff = Interval(0)
        for j in range(t + 1):
            c = (-1) ** (t - j) * math.comb(t, j)
            diff = diff + vals[j] * c
        out.append(diff / h ** t)
    return out


def equality_point_system(a: AlphaAlgebraic, precision_bits: int = 256) -> dict[str, tuple[Interval, Interval]]:
    """At ``x = (1+alpha)^(-1/r)``: pairs (computed from x, expected from alpha)."""
    a = _ready(a, precision_bits + 8)
    X = x_equality_point(a, precision_bits)
    A = a.enclosure
    Xr, Xk = X ** a.r, X ** a.k
    return {
        "1-x^r": (1 - Xr, A / (1 + A)),
        "(1-x^r)/x^r": (Xr.reciprocal() - 1, A),
        "(1-x^k)/x^k": (Xk.reciprocal() - 1, A.reciprocal()),
    }
