"""Dense exact polynomials over Q and over the rank-2 space ``{a + b*alpha}``.

Coefficient lists are constant-term first.  :class:`AlphaLinearPolynomial`
stores each coefficient as a pair ``(a, b)`` meaning ``a + b*alpha`` for a
fixed (unknown, bracketed) real ``alpha``; products are only ever formed
against rational polynomials so the ``b`` parts never multiply together.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .exact import Interval, Rational, format_rational, parse_rational

Pair = tuple[Fraction, Fraction]
_ZERO = Fraction(0)


def _trim(coeffs: list, is_zero) -> list:
    n = len(coeffs)
    while n and is_zero(coeffs[n - 1]):
        n -= 1
    return coeffs[:n]


class RationalPolynomial:
    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[Rational] = ()):
        c = [Fraction(x) for x in coefficients]
        self.coefficients: tuple[Fraction, ...] = tuple(_trim(c, lambda v: v == 0))

    @classmethod
    def monomial(cls, n: int, c: Rational = 1) -> "RationalPolynomial":
        return cls([0] * n + [c])

    @classmethod
    def one_minus_x_pow(cls, n: int) -> "RationalPolynomial":
        """``1 - x^n``."""
        if n == 0:
            return cls()
        return cls([1] + [0] * (n - 1) + [-1])

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coefficients) - 1

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, i: int) -> Fraction:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else _ZERO

    def is_zero(self) -> bool:
        return not self.coefficients

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial([other])
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"RationalPolynomial([{', '.join(format_rational(c) for c in self.coefficients)}])"

    def __add__(self, other) -> "RationalPolynomial":
        other = _as_rpoly(other)
        n = max(len(self), len(other))
        return RationalPolynomial([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial([-c for c in self.coefficients])

    def __sub__(self, other) -> "RationalPolynomial":
        return self + (-_as_rpoly(other))

    def __rsub__(self, other) -> "RationalPolynomial":
        return _as_rpoly(other) - self

    def __mul__(self, other):
        if isinstance(other, AlphaLinearPolynomial):
            return other * self
        other = _as_rpoly(other)
        if self.is_zero() or other.is_zero():
            return RationalPolynomial()
        out = [_ZERO] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RationalPolynomial":
        if n < 0:
            raise ValueError("negative polynomial power")
        result, base = RationalPolynomial([1]), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial([i * c for i, c in enumerate(self.coefficients)][1:])

    def compose(self, inner: "RationalPolynomial") -> "RationalPolynomial":
        acc = RationalPolynomial()
        for c in reversed(self.coefficients):
            acc = acc * inner + c
        return acc

    def reflect(self) -> "RationalPolynomial":
        """``p(1 - x)``."""
        return self.compose(RationalPolynomial([1, -1]))

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """Horner evaluation at a rational (exact) or an :class:`Interval`."""
        if isinstance(x, Interval):
            acc = Interval(0)
            for c in reversed(self.coefficients):
                acc = acc * x + c
            return acc
        x = Fraction(x)
        acc = _ZERO
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coefficients]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "RationalPolynomial":
        return cls(parse_rational(s) for s in data)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


class AlphaLinearPolynomial:
    """Polynomial with coefficients ``a_i + b_i * alpha``."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[tuple[Rational, Rational]] = ()):
        c = [(Fraction(a), Fraction(b)) for a, b in coefficients]
        self.coefficients: tuple[Pair, ...] = tuple(_trim(c, lambda p: p[0] == 0 and p[1] == 0))

    @classmethod
    def from_parts(cls, a: RationalPolynomial, b: RationalPolynomial) -> "AlphaLinearPolynomial":
        """``a(x) + alpha * b(x)``."""
        n = max(len(a), len(b))
        return cls((a[i], b[i]) for i in range(n))

    @property
    def a_part(self) -> RationalPolynomial:
        return RationalPolynomial(a for a, _ in self.coefficients)

    @property
    def b_part(self) -> RationalPolynomial:
        return RationalPolynomial(b for _, b in self.coefficients)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, i: int) -> Pair:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else (_ZERO, _ZERO)

    def is_zero(self) -> bool:
        return not self.coefficients

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlphaLinearPolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        body = ", ".join(f"({format_rational(a)}, {format_rational(b)})" for a, b in self.coefficients)
        return f"AlphaLinearPolynomial([{body}])"

    def __add__(self, other) -> "AlphaLinearPolynomial":
        other = _as_apoly(other)
        n = max(len(self), len(other))
        return AlphaLinearPolynomial(
            (self[i][0] + other[i][0], self[i][1] + other[i][1]) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "AlphaLinearPolynomial":
        return AlphaLinearPolynomial((-a, -b) for a, b in self.coefficients)

    def __sub__(self, other) -> "AlphaLinearPolynomial":
        return self + (-_as_apoly(other))

    def __rsub__(self, other) -> "AlphaLinearPolynomial":
        return _as_apoly(other) - self

    def __mul__(self, other) -> "AlphaLinearPolynomial":
        if isinstance(other, AlphaLinearPolynomial):
            raise TypeError("alpha-linear coefficients are not closed under multiplication")
        other = _as_rpoly(other)
        return AlphaLinearPolynomial.from_parts(self.a_part * other, self.b_part * other)

    __rmul__ = __mul__

    def derivative(self) -> "AlphaLinearPolynomial":
        return AlphaLinearPolynomial.from_parts(self.a_part.derivative(), self.b_part.derivative())

    def specialize(self, q: Rational) -> RationalPolynomial:
        """Substitute a rational value for alpha."""
        q = Fraction(q)
        return RationalPolynomial(a + b * q for a, b in self.coefficients)

    def evaluate_pair(self, x: Rational) -> Pair:
        """Exact ``(a(x), b(x))`` so that ``p(x) = a(x) + alpha * b(x)``."""
        return self.a_part.evaluate(x), self.b_part.evaluate(x)

    def evaluate(self, x, alpha: Interval) -> Interval:
        """Enclosure of ``p(x)`` for alpha in the given interval."""
        if isinstance(x, Interval):
            return self.a_part.evaluate(x) + alpha * self.b_part.evaluate(x)
        a, b = self.evaluate_pair(x)
        return Interval(a) + Interval(b) * alpha

    def coefficient_intervals(self, alpha: Interval) -> list[Interval]:
        return [Interval(a) + Interval(b) * alpha for a, b in self.coefficients]

    def to_json(self) -> list[list[str]]:
        return [[format_rational(a), format_rational(b)] for a, b in self.coefficients]

    @classmethod
    def from_json(cls, data) -> "AlphaLinearPolynomial":
        return cls((parse_rational(a), parse_rational(b)) for a, b in data)


Poly = Union[RationalPolynomial, AlphaLinearPolynomial]


def _as_rpoly(x) -> RationalPolynomial:
    if isinstance(x, RationalPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalPolynomial([x])
    raise TypeError(f"cannot use {type(x).__name__} as a rational polynomial")


def _as_apoly(x) -> AlphaLinearPolynomial:
    if isinstance(x, AlphaLinearPolynomial):
        return x
    r = _as_rpoly(x)
    return AlphaLinearPolynomial((c, 0) for c in r.coefficients)


def one_plus_y_powers(d: int) -> list[list[int]]:
    """Rows of Pascal's triangle: ``rows[m][i] = binom(m, i)`` for ``m <= d``."""
    return [[math.comb(m, i) for i in range(m + 1)] for m in range(d + 1)]


def mobius_reversal(p: Poly, d: int) -> Poly:
    """``(1+y)^d p(1/(1+y)) = sum_i c_i (1+y)^(d-i)``.

    Maps roots of ``p`` in ``(0, 1)`` to roots in ``(0, inf)``.  ``d`` must be
    at least ``deg p``.
    """
    if d < p.degree:
        raise ValueError("declared degree below actual degree")
    if isinstance(p, AlphaLinearPolynomial):
        return AlphaLinearPolynomial.from_parts(
            mobius_reversal(p.a_part, d), mobius_reversal(p.b_part, d)
        )
    out = [_ZERO] * (d + 1)
    for i, c in enumerate(p.coefficients):
        if c:
            m = d - i
            for t in range(m + 1):
                out[t] += c * math.comb(m, t)
    return RationalPolynomial(out)


def mobius_inverse(P: Poly, d: int) -> Poly:
    """Undo :func:`mobius_reversal`: ``x^d P((1-x)/x) = sum_i c_i (1-x)^i x^(d-i)``."""
    if d < P.degree:
        raise ValueError("declared degree below actual degree")
    if isinstance(P, AlphaLinearPolynomial):
        return AlphaLinearPolynomial.from_parts(mobius_inverse(P.a_part, d), mobius_inverse(P.b_part, d))
    out = RationalPolynomial()
    one_minus = RationalPolynomial([1, -1])
    for i, c in enumerate(P.coefficients):
        if c:
            out = out + RationalPolynomial.monomial(d - i, c) * one_minus ** i
    return out


_SIGN_CHARS = {"+": 1, "-": -1, "0": 0}


def descartes_sign_changes(signs: Sequence) -> int:
    """Number of strict sign alternations, skipping zeros.

    Accepts ints/Fractions (only their sign matters) or the characters
    ``'+'``, ``'-'``, ``'0'``.
    """
    if len(signs) == 0:
        raise ValueError("empty sign sequence")
    changes, last = 0, 0
    for s in signs:
        v = _SIGN_CHARS[s] if isinstance(s, str) else (s > 0) - (s < 0)
        if v == 0:
            continue
        if last and v != last:
            changes += 1
        last = v
    return changes


def exact_divide(p: Poly, q: RationalPolynomial) -> tuple[Poly, Poly]:
    """Long division ``p = q * quotient + remainder`` with ``deg remainder < deg q``."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if isinstance(p, AlphaLinearPolynomial):
        qa, ra = exact_divide(p.a_part, q)
        qb, rb = exact_divide(p.b_part, q)
        return (
            AlphaLinearPolynomial.from_parts(qa, qb),
            AlphaLinearPolynomial.from_parts(ra, rb),
        )
    rem = list(p.coefficients)
    dq = q.degree
    lead = q.coefficients[-1]
    if len(rem) - 1 < dq:
        return RationalPolynomial(), p
    quot = [_ZERO] * (len(rem) - dq)
    for i in range(len(rem) - 1, dq - 1, -1):
        c = rem[i] / lead
        quot[i - dq] = c
        if c:
            for j, qc in enumerate(q.coefficients):
                rem[i - dq + j] -= c * qc
    return RationalPolynomial(quot), RationalPolynomial(rem[:dq])


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _variations_on(p: RationalPolynomial, a: Fraction, b: Fraction) -> int:
    """Descartes count for roots of ``p`` in ``(a, b)``."""
    # substitute x = (a + b y)/(1 + y) and clear denominators
    d = p.degree
    num = RationalPolynomial([a, b])
    den = RationalPolynomial([1, 1])
    total = RationalPolynomial()
    num_pows = [RationalPolynomial([1])]
    for _ in range(d):
        num_pows.append(num_pows[-1] * num)
    den_pows = [RationalPolynomial([1])]
    for _ in range(d):
        den_pows.append(den_pows[-1] * den)
    for i, c in enumerate(p.coefficients):
        if c:
            total = total + num_pows[i] * den_pows[d - i] * c
    return descartes_sign_changes(total.coefficients) if not total.is_zero() else 0


def isolate_unit_interval_roots(
    p: RationalPolynomial, width: Rational, max_depth: int = 200
) -> list[Interval]:
    """Disjoint intervals in ``(0, 1)`` each bracketing a sign change of ``p``.

    Subintervals are pruned with the Descartes bound and bisected until each
    holds a single odd-multiplicity root, then shrunk to ``width``.  Roots of
    even multiplicity do not change sign and may be missed.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p(0) == 0 or p(1) == 0:
        raise ValueError("deflate roots at 0 and 1 before isolating")
    width = Fraction(width)
    out: list[Interval] = []
    stack = [(Fraction(0), Fraction(1), 0)]
    while stack:
        a, b, depth = stack.pop()
        v = _variations_on(p, a, b)
        sa, sb = _sign(p(a)), _sign(p(b))
        if v == 0:
            continue
        if v == 1 and sa != sb:
            out.append(_shrink(p, a, b, width))
            continue
        if depth >= max_depth:
            if sa != sb:
                out.append(_shrink(p, a, b, width))
            continue
        m = _split_point(p, a, b)
        stack.append((m, b, depth + 1))
        stack.append((a, m, depth + 1))
    out.sort(key=lambda iv: iv.lo)
    return out


def _split_point(p: RationalPolynomial, a: Fraction, b: Fraction) -> Fraction:
    m = (a + b) / 2
    step = (b - a) / 64
    i = 1
    while p(m) == 0:
        m = (a + b) / 2 + (i if i % 2 else -i) * step / 2
        i += 1
    return m


def _shrink(p: RationalPolynomial, a: Fraction, b: Fraction, width: Fraction) -> Interval:
    sa = _sign(p(a))
    while b - a > width:
        m = (a + b) / 2
        sm = _sign(p(m))
        if sm == 0:
            return Interval(m, m)
        if sm == sa:
            a = m
        else:
            b = m
    return Interval(a, b)
