from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropy_cert.exact import (
    Interval,
    Q,
    binomial,
    format_rational,
    interval_entropy,
    interval_log,
    interval_root,
    parse_rational,
    scaled_pochhammer,
)

mpmath.mp.dps = 120


def mp(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def encloses(iv: Interval, value: mpmath.mpf) -> bool:
    # the oracle carries 120 digits, far beyond any enclosure width tested here
    return mp(iv.lo) <= value <= mp(iv.hi)


positive_rationals = st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 6)
unit_rationals = st.fractions(min_value=0, max_value=1)


def test_binomial_examples():
    assert binomial(5, 2) == 10
    assert binomial(-3, 2) == 6
    assert binomial(1, 2) == 0
    with pytest.raises(ValueError):
        binomial(3, -1)


def test_binomial_pascal_rule_including_negative_upper():
    for n in range(-10, 11):
        for k in range(1, 11):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


def test_scaled_pochhammer():
    assert scaled_pochhammer(3, 1, 3) == 6
    assert scaled_pochhammer(Q(2, 7), 1, 0) == 1
    assert scaled_pochhammer(1, 2, 3) == 3


def test_rational_serialization_round_trip():
    for x in (Q(-2, 3), Q(7), Q(0), Q(10 ** 40 + 1, 3 ** 50)):
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Q(-2, 3)) == "-2/3"
    assert format_rational(7) == "7/1"
    with pytest.raises(ValueError):
        parse_rational("2/4")
    with pytest.raises(ValueError):
        parse_rational("0.5")
    assert parse_rational("1e-6", strict=False) == Q(1, 10 ** 6)


def test_fraction_is_canonical():
    x = Q(6, -8)
    assert (x.numerator, x.denominator) == (-3, 4)
    assert Q(1, 6) + Q(1, 3) == Q(1, 2)


def test_interval_rejects_empty():
    with pytest.raises(ValueError):
        Interval(1, 0)


@given(positive_rationals, positive_rationals, positive_rationals, positive_rationals)
def test_interval_arithmetic_contains_pointwise_results(a, b, c, d):
    x, y = Interval(min(a, b), max(a, b)), Interval(min(c, d), max(c, d))
    for u in (x.lo, x.mid, x.hi):
        for v in (y.lo, y.mid, y.hi):
            assert u + v in x + y
            assert u - v in x - y
            assert u * v in x * y
            assert u / v in x / y
            assert -u in -x


def test_reciprocal_across_zero():
    with pytest.raises(ZeroDivisionError):
        Interval(-1, 1).reciprocal()


@given(st.fractions(min_value=-5, max_value=5), st.fractions(min_value=-5, max_value=5), st.integers(0, 6))
def test_interval_power_is_tight_range(a, b, n):
    x = Interval(min(a, b), max(a, b))
    p = x ** n
    vals = [x.lo ** n, x.hi ** n] + ([Fraction(0)] if n and x.lo <= 0 <= x.hi else [])
    assert p.lo == min(vals) and p.hi == max(vals)


def test_log_examples():
    one = interval_log(Interval(1), 64)
    assert 0 in one and one.width <= Fraction(1, 2 ** 64)
    half = interval_log(Q(1, 2), 64)
    assert encloses(half, mpmath.log(mpmath.mpf(1) / 2))
    wide = interval_log(Interval(2, 4), 16)
    assert encloses(wide, mpmath.log(2)) and encloses(wide, mpmath.log(4))


def test_log_rejects_nonpositive():
    with pytest.raises(ValueError):
        interval_log(Interval(0, 1))
    with pytest.raises(ValueError):
        interval_log(Interval(-1))
    with pytest.raises(ValueError):
        interval_log(Q(2), 8)


@settings(max_examples=60, deadline=None)
@given(positive_rationals, st.sampled_from([16, 64, 200]))
def test_log_enclosure_and_width(x, bits):
    iv = interval_log(x, bits)
    assert encloses(iv, mpmath.log(mp(x)))
    assert iv.width <= Fraction(1, 2 ** bits) * max(1, abs(iv.lo))


@settings(max_examples=40, deadline=None)
@given(positive_rationals)
def test_log_doubling_precision_never_widens(x):
    widths = [interval_log(x, p).width for p in (32, 64, 128, 256)]
    assert all(a >= b for a, b in zip(widths, widths[1:]))


def test_entropy_examples():
    assert interval_entropy(Interval(0)) == Interval(0)
    assert interval_entropy(Interval(1)) == Interval(0)
    assert encloses(interval_entropy(Q(1, 2), 64), mpmath.log(2))
    quarter = Q(1, 4) * mpmath.log(4) + Q(3, 4) * mpmath.log(mpmath.mpf(4) / 3)
    assert encloses(interval_entropy(Q(1, 4), 64), quarter)
    with pytest.raises(ValueError):
        interval_entropy(Interval(Q(1, 2), Q(3, 2)))


def H(t):
    t = mpmath.mpf(t)
    if t in (0, 1):
        return mpmath.mpf(0)
    return -t * mpmath.log(t) - (1 - t) * mpmath.log(1 - t)


@settings(max_examples=50, deadline=None)
@given(unit_rationals, unit_rationals)
def test_entropy_range_enclosure(a, b):
    iv = interval_entropy(Interval(min(a, b), max(a, b)), 80)
    lo, hi = min(a, b), max(a, b)
    for t in (lo, (lo + hi) / 2, hi):
        assert encloses(iv, H(mp(t)))
    if lo <= Q(1, 2) <= hi:
        assert encloses(iv, mpmath.log(2))


@settings(max_examples=50, deadline=None)
@given(unit_rationals, st.sampled_from([16, 64, 128]))
def test_entropy_symmetry(x, bits):
    assert interval_entropy(x, bits).overlaps(interval_entropy(1 - x, bits))


def test_round_out_contains():
    x = Interval(Q(1, 3), Q(2, 3))
    r = x.round_out(10)
    assert r.contains(x)
    assert r.lo.denominator <= 1024 and r.hi.denominator <= 1024


@given(st.fractions(min_value=0, max_value=100), st.integers(1, 5))
def test_interval_root_encloses(x, r):
    iv = interval_root(x, r, 60)
    assert encloses(iv, mpmath.root(mp(x), r))
    assert iv.width <= Fraction(2, 2 ** 60) or r == 1
