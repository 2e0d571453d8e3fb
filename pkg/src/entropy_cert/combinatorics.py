"""Number families: entropy-polynomial coefficients, generalized Stirling,
Eulerian and Bernoulli numbers, s-binomial coefficients.

All values are exact.  Generalized Stirling numbers follow the Hsu-Shiue
convention ``S(n, l | alpha, beta, gamma)``, the connection coefficients
between the scaled-Pochhammer bases ``(z|alpha)_n`` and ``(z-gamma|beta)_l``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import Rational, binomial, format_rational, scaled_pochhammer


@dataclass(frozen=True)
class StirlingParams:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __init__(self, alpha: Rational, beta: Rational, gamma: Rational):
        object.__setattr__(self, "alpha", Fraction(alpha))
        object.__setattr__(self, "beta", Fraction(beta))
        object.__setattr__(self, "gamma", Fraction(gamma))


class UnsupportedParameters(ValueError):
    pass


# ---------------------------------------------------------------------------
# entropy polynomial coefficients


@lru_cache(maxsize=None)
def h_coeff(k: int, r: int, j: int) -> Fraction:
    """``sum_{v=0}^{j} (-1)^(j-v)/(v+1) binom(rv+k, k) binom(k, j-v)``."""
    if k < 1 or r < 1 or j < 0:
        raise ValueError("need k >= 1, r >= 1, j >= 0")
    total = Fraction(0)
    for v in range(max(0, j - k), j + 1):
        term = Fraction(binomial(r * v + k, k) * binomial(k, j - v), v + 1)
        total += -term if (j - v) % 2 else term
    return total


def h_coeff_alt(k: int, r: int, j: int) -> Fraction:
    """The ``k - j`` term finite-difference form of :func:`h_coeff`, valid for
    ``1 <= r <= k`` and ``1 <= j < k``."""
    if not (1 <= r <= k and 1 <= j < k):
        raise ValueError("h_coeff_alt needs 1 <= r <= k and 1 <= j < k")
    sign = -1 if (j + r + 1) % 2 else 1
    total = Fraction(sign * binomial(k, j + 1), binomial(k, r))
    for v in range(2, k - j + 1):
        term = Fraction(binomial(k, j + v) * binomial(k - r * v, k), v - 1)
        total += -term if (j + v) % 2 else term
    return total


@dataclass(frozen=True)
class HCoefficientTable:
    """Coefficients of ``h_{k,r}(x)``; ``coefficients[j]`` multiplies ``x^(r j)``."""

    k: int
    r: int
    coefficients: tuple[Fraction, ...]

    def as_polynomial(self):
        from .poly import RationalPolynomial

        dense = [Fraction(0)] * (self.r * (len(self.coefficients) - 1) + 1)
        for j, c in enumerate(self.coefficients):
            dense[self.r * j] = c
        return RationalPolynomial(dense)

    def to_json(self) -> str:
        return json.dumps([format_rational(c) for c in self.coefficients])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "r", "j", "value"])
        for j, c in enumerate(self.coefficients):
            w.writerow([self.k, self.r, j, format_rational(c)])
        return buf.getvalue()


def h_poly(k: int, r: int, length: int | None = None) -> HCoefficientTable:
    """Table of ``h_{k,r,j}`` for ``j = 0..k-1``.

    For ``r > k`` the coefficients do not terminate; pass ``length`` to pick
    how many to keep (defaults to ``k``).
    """
    if k < 1 or r < 1:
        raise ValueError("need k, r >= 1")
    n = k if length is None else length
    return HCoefficientTable(k, r, tuple(h_coeff(k, r, j) for j in range(n)))


# ---------------------------------------------------------------------------
# Stirling numbers


def classical_stirling2(n: int, l: int) -> int:
    """Stirling numbers of the second kind from the alternating closed form."""
    if l < 0 or n < 0:
        raise ValueError("need n, l >= 0")
    total = sum((-1) ** (l - v) * math.comb(l, v) * v ** n for v in range(l + 1))
    q, rem = divmod(total, math.factorial(l))
    assert rem == 0
    return q


@lru_cache(maxsize=None)
def _stirling_rows(n: int, params: StirlingParams) -> tuple[tuple[Fraction, ...], ...]:
    a, b, g = params.alpha, params.beta, params.gamma
    if n == 0:
        return ((Fraction(1),),)
    prev_rows = _stirling_rows(n - 1, params)
    prev = prev_rows[-1]
    m = n - 1
    row = []
    for l in range(n + 1):
        left = prev[l - 1] if l >= 1 else Fraction(0)
        here = prev[l] if l <= m else Fraction(0)
        row.append(left + (l * b - m * a + g) * here)
    return prev_rows + (tuple(row),)


def gen_stirling(n: int, l: int, params: StirlingParams, method: str = "recurrence") -> Fraction:
    """Generalized Stirling number ``S(n, l | alpha, beta, gamma)``.

    ``recurrence``: ``S(n+1,l) = S(n,l-1) + (l beta - n alpha + gamma) S(n,l)``
    from ``S(0,0) = 1``.  ``closed_form``: the alternating sum over
    ``(beta j + gamma | alpha)_n``, which needs ``beta != 0``.
    """
    if n < 0 or l < 0:
        raise ValueError("need n, l >= 0")
    if l > n:
        return Fraction(0)
    if method == "recurrence":
        return _stirling_rows(n, params)[n][l]
    if method == "closed_form":
        a, b, g = params.alpha, params.beta, params.gamma
        if b == 0:
            raise UnsupportedParameters("closed form needs beta != 0")
        if a == 1 and b.denominator == 1 and g.denominator == 1:
            return _stirling_alpha_one(n, l, int(b), int(g))
        total = sum(
            (-1) ** j * math.comb(l, j) * scaled_pochhammer(b * j + g, a, n) for j in range(l + 1)
        )
        return (-1) ** l * total / (b ** l * math.factorial(l))
    raise ValueError(f"unknown method {method!r}")


def _stirling_alpha_one(n: int, l: int, beta: int, gamma: int) -> Fraction:
    # l! S(n,l|1,beta,gamma) beta^l = sum_v (-1)^(l-v) binom(l,v) n! binom(beta v + gamma, n)
    total = sum(
        (-1) ** (l - v) * math.comb(l, v) * binomial(beta * v + gamma, n) for v in range(l + 1)
    )
    return Fraction(total * math.factorial(n), math.factorial(l) * beta ** l)


def stirling_limit_gap(n: int, l: int, beta: int) -> Fraction:
    """``|S(n,l|1,beta,0) beta^l / beta^n - S(n,l)|``; tends to 0 as ``beta`` grows."""
    scaled = gen_stirling(n, l, StirlingParams(1, beta, 0), "closed_form") * Fraction(beta) ** (l - n)
    return abs(scaled - classical_stirling2(n, l))


# ---------------------------------------------------------------------------
# Eulerian and Bernoulli numbers


def eulerian(n: int, l: int) -> int:
    return sum((-1) ** (l - v) * math.comb(n + 1, l - v) * (v + 1) ** n for v in range(l + 1))


def gen_eulerian(n: int, l: int, r: int, s: int) -> Fraction:
    """``A^{(r,s)}_{n,l} = n! sum_v (-1)^(l-v) binom(n+1, l-v) binom((v+1) r + s, n)``."""
    total = sum(
        (-1) ** (l - v) * math.comb(n + 1, l - v) * binomial((v + 1) * r + s, n)
        for v in range(l + 1)
    )
    return Fraction(math.factorial(n) * total)


def eulerian_limit_gap(n: int, l: int, r: int) -> Fraction:
    """``|A^{(r,0)}_{n,l} / r^n - A_{n,l}|``."""
    return abs(gen_eulerian(n, l, r, 0) / Fraction(r) ** n - eulerian(n, l))


def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers from the double-sum closed form (``B_1 = -1/2``)."""
    total = Fraction(0)
    for l in range(n + 1):
        inner = sum((-1) ** v * math.comb(l, v) * v ** n for v in range(l + 1))
        total += Fraction(inner, l + 1)
    return total


def gen_bernoulli(n: int, r: int, s: int) -> Fraction:
    total = Fraction(0)
    for l in range(n + 1):
        inner = sum((-1) ** v * math.comb(l, v) * binomial(r * v + s, n) for v in range(l + 1))
        total += Fraction(inner, l + 1)
    return math.factorial(n) * total


# ---------------------------------------------------------------------------
# s-binomial coefficients


@lru_cache(maxsize=None)
def _s_binomial_row(k: int, s: int) -> tuple[int, ...]:
    row = [1]
    for _ in range(k):
        nxt = [0] * (len(row) + s)
        for i, c in enumerate(row):
            for t in range(s + 1):
                nxt[i + t] += c
        row = nxt
    return tuple(row)


def s_binomial(k: int, l: int, s: int, method: str = "generating_function") -> int:
    """Coefficient of ``x^l`` in ``(1 + x + ... + x^s)^k``."""
    if k < 0 or s < 0:
        raise ValueError("need k, s >= 0")
    if l < 0 or l > k * s:
        return 0
    if method == "generating_function":
        return _s_binomial_row(k, s)[l]
    if method == "de_moivre":
        if k == 0:
            return 1 if l == 0 else 0
        step = s + 1
        return sum(
            (-1) ** v * math.comb(k, v) * math.comb(l - v * step + k - 1, k - 1)
            for v in range(l // step + 1)
        )
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Dobinski-type identity, checked numerically


def _exp_enclosure(x: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    """Partial sum of ``e^x`` for ``0 <= x <= 1`` and a bound on the omitted tail."""
    total, term = Fraction(0), Fraction(1)
    for i in range(terms):
        total += term
        term = term * x / (i + 1)
    # remaining terms are dominated by a geometric series with ratio 1/2
    return total, 2 * term


def dobinski_gap(n: int, r: int, s: int, x: Fraction = Fraction(1, 2), M: int = 60) -> tuple[Fraction, Fraction]:
    """Compare both sides of the Dobinski-type formula at ``x``.

    Returns ``(discrepancy, allowance)``: the absolute difference between the
    truncated left side and the right side computed with a truncated
    exponential, and the rigorous truncation allowance for both.  The
    identity is confirmed when ``discrepancy <= allowance``.
    """
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    lhs = Fraction(0)
    term_scale = Fraction(1)
    for l in range(M):
        lhs += term_scale * binomial(r * l + s, n)
        term_scale = term_scale * x / (l + 1)
    # |binom(rl+s, n)| <= c(l); the majorant's term ratio decreases in l
    def c(l: int) -> Fraction:
        return Fraction((r * l + abs(s) + n) ** n, math.factorial(n))

    ratio = x * c(M + 1) / (c(M) * (M + 1))
    if ratio >= Fraction(1, 2):
        raise ValueError("truncation M too small for a sound tail bound")
    lhs_tail = 2 * term_scale * c(M)
    poly = sum(
        gen_stirling(n, l, StirlingParams(1, r, s)) * Fraction(r) ** l * x ** l for l in range(n + 1)
    ) / math.factorial(n)
    e_val, e_tail = _exp_enclosure(x, M)
    rhs = poly * e_val
    return abs(lhs - rhs), lhs_tail + abs(poly) * e_tail
