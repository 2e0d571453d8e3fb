"""Named batches of exact identity checks, as run by ``entropy-cert identities``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from . import combinatorics as cb
from . import forms

SUITES = ("stirling", "eulerian", "bernoulli", "cor6", "cor7", "termination", "finite-diff", "stir1")


@dataclass(frozen=True)
class Check:
    name: str
    params: str
    passed: bool

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} {self.params}"


def _strictly_decreasing(xs) -> bool:
    return all(a > b for a, b in zip(xs, xs[1:]))


def stirling_suite(kmax: int, rmax: int) -> Iterator[Check]:
    nmax = max(kmax, 10)
    for alpha in (1, 2):
        for beta in range(1, max(rmax, 5) + 1):
            for gamma in range(-3, 4):
                p = cb.StirlingParams(alpha, beta, gamma)
                ok = all(
                    cb.gen_stirling(n, l, p) == cb.gen_stirling(n, l, p, "closed_form")
                    for n in range(nmax + 1)
                    for l in range(n + 1)
                )
                yield Check("stirling-recurrence-vs-closed", f"alpha={alpha} beta={beta} gamma={gamma} n<={nmax}", ok)
    ok = all(
        cb.gen_stirling(n, l, cb.StirlingParams(0, 1, 0)) == cb.classical_stirling2(n, l)
        for n in range(nmax + 1)
        for l in range(n + 1)
    )
    yield Check("stirling-classical", f"n<={nmax}", ok)
    for n, l in ((3, 2), (4, 2), (5, 3)):
        gaps = [cb.stirling_limit_gap(n, l, b) for b in (10, 100, 1000)]
        yield Check("stirling-limit-gap", f"n={n} l={l}", _strictly_decreasing(gaps))
    for k in range(1, min(kmax, 8) + 1):
        for r in range(1, min(k, rmax) + 1):
            yield Check("derivative-stirling-form", f"k={k} r={r}", forms.stirling_identity_check(k, r))
    for n in range(7):
        for r in range(1, 5):
            for s in range(5):
                gap, allowance = cb.dobinski_gap(n, r, s)
                ok = gap <= allowance and allowance < Fraction(1, 10 ** 30)
                yield Check("dobinski", f"n={n} r={r} s={s}", ok)


def eulerian_suite(kmax: int, rmax: int) -> Iterator[Check]:
    nmax = min(kmax, 4)
    for n in range(1, nmax + 1):
        for r in range(1, min(rmax, 3) + 1):
            for s in range(n + r):
                ok = forms.eulerian_transform_check(n, r, s, n + 8)
                yield Check("eulerian-transform", f"n={n} r={r} s={s}", ok)
    for n in range(1, 6):
        ok = sum(cb.eulerian(n, l) for l in range(n)) == math.factorial(n)
        yield Check("eulerian-row-sum", f"n={n}", ok)
        for l in range(n):
            gaps = [cb.eulerian_limit_gap(n, l, r) for r in (4, 8, 16, 32)]
            ok = all(g == 0 for g in gaps) or _strictly_decreasing(gaps)
            yield Check("eulerian-limit-gap", f"n={n} l={l}", ok)


def bernoulli_suite(kmax: int, rmax: int) -> Iterator[Check]:
    yield Check("bernoulli-B1", "", cb.bernoulli(1) == Fraction(-1, 2))
    yield Check("bernoulli-B2", "", cb.bernoulli(2) == Fraction(1, 6))
    nmax = max(kmax, 10)
    B = [cb.bernoulli(n) for n in range(nmax + 1)]
    ok = all(sum(math.comb(n + 1, j) * B[j] for j in range(n + 1)) == 0 for n in range(1, nmax + 1))
    yield Check("bernoulli-recurrence", f"n<={nmax}", ok)
    yield Check("bernoulli-odd-vanish", f"n<={nmax}", all(B[n] == 0 for n in range(3, nmax + 1, 2)))
    for n in range(2, 6):
        gaps = [abs(cb.gen_bernoulli(n, r, 0) / Fraction(r) ** n - B[n]) for r in (10, 100, 1000)]
        yield Check("bernoulli-limit-gap", f"n={n}", _strictly_decreasing(gaps))


def cor6_suite(kmax: int, rmax: int) -> Iterator[Check]:
    for k in range(1, max(kmax, 1) + 1):
        yield Check("cor6-cleared", f"k={k}", forms.cor6_identity(k))
        ok = all(
            forms.deriv_rational(k, 1, x) == forms.cor6_closed_form(k, x)
            for x in (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10))
        )
        yield Check("cor6-closed-form", f"k={k}", ok)


def cor7_suite(kmax: int, rmax: int) -> Iterator[Check]:
    for k in range(1, max(kmax, 1) + 1):
        yield Check("cor7", f"k={k}", forms.cor7_checks(k))
    for k in range(1, min(kmax, 8) + 1):
        for s in range(6):
            ok = all(
                cb.s_binomial(k, l, s) == cb.s_binomial(k, l, s, "de_moivre")
                == cb.s_binomial(k, k * s - l, s)
                for l in range(k * s + 1)
            )
            yield Check("s-binomial-de-moivre", f"k={k} s={s}", ok)


def termination_suite(kmax: int, rmax: int) -> Iterator[Check]:
    for k in range(1, kmax + 1):
        for r in range(1, min(k, rmax) + 1):
            yield Check("series-termination", f"k={k} r={r}", forms.termination_check(k, r, 2 * k + 4))


def finite_difference_suite(kmax: int, rmax: int) -> Iterator[Check]:
    for k in range(1, kmax + 1):
        for r in range(1, min(k, rmax) + 1):
            vanish = all(cb.h_coeff(k, r, j) == 0 for j in range(k, 2 * k + 1))
            alt = all(cb.h_coeff(k, r, j) == cb.h_coeff_alt(k, r, j) for j in range(1, k))
            # j = k - 1 in the alternate form leaves a single term
            lead = cb.h_coeff(k, r, k - 1) == Fraction((-1) ** (k + r), math.comb(k, r))
            top = cb.h_coeff(k, r, k) == Fraction(cb.binomial(r - 1, k), k + 1)
            yield Check("h-vanishing", f"k={k} r={r}", vanish)
            yield Check("h-alternate-form", f"k={k} r={r}", alt)
            yield Check("h-leading", f"k={k} r={r}", lead)
            yield Check("h-top", f"k={k} r={r}", top)


def stir1_suite(kmax: int, rmax: int) -> Iterator[Check]:
    for n in range(1, min(kmax, 6) + 1):
        for r in range(1, min(rmax, 4) + 1):
            for s in range(r, n + r):
                yield Check("laplace-pair", f"n={n} r={r} s={s}", forms.stir1_checks(n, r, s, n + 8))


_RUNNERS: dict[str, Callable[[int, int], Iterator[Check]]] = {
    "stirling": stirling_suite,
    "eulerian": eulerian_suite,
    "bernoulli": bernoulli_suite,
    "cor6": cor6_suite,
    "cor7": cor7_suite,
    "termination": termination_suite,
    "finite-diff": finite_difference_suite,
    "stir1": stir1_suite,
}


def run_suite(name: str, kmax: int = 6, rmax: int | None = None) -> list[Check]:
    if kmax < 1 or (rmax is not None and rmax < 1):
        raise ValueError("bounds must be at least 1")
    rmax = kmax if rmax is None else rmax
    names = SUITES if name == "all" else (name,)
    out: list[Check] = []
    for n in names:
        if n not in _RUNNERS:
            raise KeyError(n)
        out.extend(_RUNNERS[n](kmax, rmax))
    return out
