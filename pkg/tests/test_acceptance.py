"""Acceptance gate: one test and one PASS/FAIL line per criterion."""

import math
import time
from contextlib import contextmanager
from fractions import Fraction

import mpmath

from conftest import ACCEPTANCE_RESULTS
from entropy_cert.alpha import (
    alpha_asymptotic_gap,
    alpha_new,
    alpha_refine,
    functional_residual,
    lagrange_partial_sum,
    lagrange_report,
    solve_x_plus_xk,
    x_equality_point,
)
from entropy_cert.certify import CERTIFIED, build_p, coefficient_signs, verify_exponent
from entropy_cert.combinatorics import (
    StirlingParams,
    bernoulli,
    dobinski_gap,
    eulerian_limit_gap,
    gen_stirling,
    h_coeff,
    h_coeff_alt,
    h_poly,
    s_binomial,
    stirling_limit_gap,
)
from entropy_cert.exact import Q, binomial, interval_log
from entropy_cert.forms import (
    cor6_identity,
    cor7_checks,
    deriv_rational,
    deriv_series_to_width,
    eulerian_transform_check,
    f_deriv_eval,
    f_eval,
    inequality_scan,
    stirling_identity_check,
)
from entropy_cert.poly import descartes_sign_changes

F = Fraction


@contextmanager
def criterion(n: int, desc: str, limit: float | None = None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.1f} s, limit {limit} s"
    except BaseException:
        ACCEPTANCE_RESULTS[(n, desc)] = "FAIL"
        print(f"ACCEPTANCE {n:2d} FAIL: {desc}")
        raise
    ACCEPTANCE_RESULTS[(n, desc)] = "PASS"
    print(f"ACCEPTANCE {n:2d} PASS: {desc} ({elapsed:.2f} s)")


def test_criterion_01_golden_tables():
    golden = {
        (1, 1): [1],
        (2, 2): [1, 1],
        (3, 3): [1, 7, 1],
        (4, 4): [1, 31, 31, 1],
        (4, 1): [1, F(-3, 2), 1, F(-1, 4)],
        (4, 2): [1, F(7, 2), F(-2, 3), F(1, 6)],
        (4, 3): [1, F(27, 2), 6, F(-1, 4)],
    }
    with criterion(1, "golden entropy-polynomial tables", limit=1):
        for kr, coeffs in golden.items():
            assert list(h_poly(*kr).coefficients) == coeffs


def test_criterion_02_vanishing_and_alternate_form():
    with criterion(2, "vanishing for k <= j <= 2k and the k-j term form, k <= 12", limit=10):
        for k in range(1, 13):
            for r in range(1, k + 1):
                assert all(h_coeff(k, r, j) == 0 for j in range(k, 2 * k + 1))
                assert all(h_coeff(k, r, j) == h_coeff_alt(k, r, j) for j in range(1, k))


def test_criterion_03_leading_and_top_coefficients():
    desc = "leading coefficient (-1)^(k+r)/binom(k,r) (the (-1)^r form for even k) and top binom(r-1,k)/(k+1)"
    with criterion(3, desc):
        for k in range(1, 13):
            for r in range(1, k + 1):
                lead = h_coeff(k, r, k - 1)
                assert lead == F((-1) ** (k + r), math.comb(k, r))
                if k % 2 == 0:
                    assert lead == F((-1) ** r, math.comb(k, r))
        for k in range(1, 9):
            for r in range(1, 2 * k + 1):
                assert h_coeff(k, r, k) == F(binomial(r - 1, k), k + 1)


def test_criterion_04_derivative_forms():
    with criterion(4, "three derivative forms, series widths <= 1e-25, cleared closed-form identities"):
        for k in range(1, 9):
            for r in range(1, k + 1):
                assert stirling_identity_check(k, r)
                for x in (Q(1, 10), Q(1, 2), Q(9, 10)):
                    iv = deriv_series_to_width(k, r, x, Q(1, 10 ** 25))
                    assert deriv_rational(k, r, x) in iv
                    assert iv.width <= Q(1, 10 ** 25)
        assert all(cor6_identity(k) for k in range(1, 13))
        assert all(cor7_checks(k) for k in range(1, 11))


def test_criterion_05_worked_example():
    with criterion(5, "k/r = 3/2 certified, 2 transformed and 7 raw sign changes, roots and alpha", limit=10):
        c = verify_exponent(3, 2)
        assert c.verdict == CERTIFIED
        assert c.descartes_count == 2 == descartes_sign_changes(c.signs)
        raw, _ = coefficient_signs(build_p(3, 2), alpha_new(3, 2))
        assert descartes_sign_changes(raw) == 7
        for br, root in zip(c.root_brackets, (F("0.204863"), F("0.74186"))):
            assert br.lo <= root <= br.hi
            assert root - Q(1, 1000) <= br.lo and br.hi <= root + Q(1, 1000)
        a = alpha_refine(alpha_new(3, 2), Q(1, 10 ** 6))
        assert a.enclosure.width <= Q(1, 10 ** 6)
        assert abs(a.enclosure.mid - F("0.754878")) <= Q(1, 10 ** 6)


def test_criterion_06_known_exponents():
    with criterion(6, "exponents 2, 3, 4 certified", limit=60):
        for k in (2, 3, 4):
            assert verify_exponent(k, 1).verdict == CERTIFIED


def test_criterion_07_inequality_scan():
    with criterion(7, "scans of (3,2) and (2,1): lower bound >= -1e-9, zero cells only at 0, x0, 1"):
        for k, r in ((3, 2), (2, 1)):
            a = alpha_new(k, r)
            grid = 1000
            res = inequality_scan(a, grid=grid, precision_bits=256)
            assert res.min_lower_bound >= -Q(1, 10 ** 9)
            x0 = x_equality_point(a, 256)
            special = {0, grid - 1, int(x0.lo * grid), int(x0.hi * grid)}
            for cell in res.zero_cells:
                assert any(abs(cell - s) <= 1 for s in special), cell
            assert {0, grid - 1} <= set(res.zero_cells)
            fv, fd = f_eval(a, x0, 256), f_deriv_eval(a, x0, 256)
            assert 0 in fv and 0 in fd
            assert fv.width <= Q(1, 10 ** 20) and fd.width <= Q(1, 10 ** 20)


def test_criterion_08_alpha_properties():
    ladder = [(6, 5), (5, 4), (4, 3), (3, 2), (5, 3), (2, 1), (5, 2), (3, 1), (4, 1), (6, 1)]
    with criterion(8, "alpha: functional equation, r/k < alpha < 1, ladder monotone, alpha k/r > 1"):
        encl = []
        for k, r in ladder:
            a = alpha_refine(alpha_new(k, r), Q(1, 10 ** 8))
            e = a.enclosure
            assert e.width <= Q(1, 10 ** 8)
            assert 1 in functional_residual(a)
            assert F(r, k) < e.lo and e.hi < 1
            assert e.lo * k > r
            encl.append(e)
        for lower_q, higher_q in zip(encl, encl[1:]):
            assert higher_q.hi < lower_q.lo


def test_criterion_09_asymptotics():
    with criterion(9, "|alpha_k - (log k - b_k)/k| <= 5 log^2 k / k^2 for k = 1e3, 1e4, 1e5", limit=60):
        for k in (10 ** 3, 10 ** 4, 10 ** 5):
            gap = alpha_asymptotic_gap(k, 128)
            bound = 5 * interval_log(k, 128) ** 2 / (k * k)
            assert gap.hi <= bound.lo


def test_criterion_10_lagrange():
    with criterion(10, "Lagrange series converges at z = 1/8, 1/4 and is flagged diverging at z = 1"):
        for k, z in ((2, Q(1, 8)), (3, Q(1, 4))):
            value, _ = lagrange_partial_sum(k, 1, z, 60)
            root = solve_x_plus_xk(k, z, Q(1, 10 ** 30))
            assert abs(value - root.mid) < Q(1, 10 ** 12)
        for k in (2, 3, 4):
            assert lagrange_report(k, 1, 1, 40).diverging


def test_criterion_11_identity_suites():
    with criterion(11, "Stirling, de Moivre, Eulerian, Dobinski, Bernoulli and classical-limit suites", limit=300):
        for alpha in (1, 2):
            for beta in range(1, 6):
                for gamma in range(-3, 4):
                    p = StirlingParams(alpha, beta, gamma)
                    for n in range(11):
                        for l in range(n + 1):
                            assert gen_stirling(n, l, p) == gen_stirling(n, l, p, "closed_form")
        for k in range(1, 9):
            for s in range(6):
                for l in range(k * s + 1):
                    assert s_binomial(k, l, s) == s_binomial(k, l, s, "de_moivre")
        for n in range(1, 5):
            for r in range(1, 4):
                for s in range(n + r):
                    assert eulerian_transform_check(n, r, s, n + 8)
        for n in range(7):
            for r in range(1, 5):
                for s in range(5):
                    gap, allowance = dobinski_gap(n, r, s)
                    assert gap <= allowance <= Q(1, 10 ** 30)
        assert bernoulli(1) == F(-1, 2) and bernoulli(2) == F(1, 6)
        g = [stirling_limit_gap(3, 2, b) for b in (10, 100, 1000)]
        assert g[0] > g[1] > g[2]
        e = [eulerian_limit_gap(2, 1, r) for r in (2, 4, 8, 16)]
        assert e[0] > e[1] > e[2] > e[3]
