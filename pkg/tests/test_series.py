import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from phylosym.errors import CapacityError
from phylosym.series import (
    bivariate_F,
    labeled_scale,
    otter_numbers,
    otter_series,
    phylo_egf,
    phylo_egf_closed_form,
    pn_exact,
    pn_sequence,
    specialize,
    specialized_series,
)
from phylosym.trees import count_phylo, enumerate_phylo, shape_of

# A001190, n = 1..20
WE = [1, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451, 983, 2179, 4850, 10905, 24631, 56011, 127912, 293547]

# from grouping every tree of B_8 and B_9 by shape (no series involved)
P8, P9 = Fraction(12497, 184041), Fraction(17893, 511225)
P10 = Fraction(102797, 5909761)


def naive_polys(N):
    """f_n(u) from F = z + F^2/2 + (u - 1/2) F(z^2, u^2), with Fraction polynomials."""
    f = [None, [Fraction(1)]]

    def mul(p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] += a * b
        return out

    def add(p, q):
        out = [Fraction(0)] * max(len(p), len(q))
        for i, a in enumerate(p):
            out[i] += a
        for i, b in enumerate(q):
            out[i] += b
        return out

    for n in range(2, N + 1):
        acc = [Fraction(0)]
        for k in range(1, n):
            acc = add(acc, mul(f[k], f[n - k]))
        acc = [c / 2 for c in acc]
        if n % 2 == 0:
            sq = [Fraction(0)] * (2 * len(f[n // 2]) - 1)
            for i, c in enumerate(f[n // 2]):
                sq[2 * i] = c
            acc = add(acc, mul([Fraction(-1, 2), Fraction(1)], sq))
        while len(acc) > 1 and acc[-1] == 0:
            acc.pop()
        f.append(acc)
    return f


def test_kronecker_matches_naive_recursion():
    F = bivariate_F(40)
    ref = naive_polys(40)
    for n in range(1, 41):
        assert all(c.denominator == 1 for c in ref[n])
        poly = list(F.poly(n))
        while len(poly) > 1 and poly[-1] == 0:
            poly.pop()
        assert poly == [int(c) for c in ref[n]]


def test_wedderburn_etherington():
    assert list(otter_numbers(20)[1:]) == WE
    F = bivariate_F(20)
    assert [F.evaluate(n, 1) for n in range(1, 21)] == WE
    assert [otter_series(20)[n] for n in range(1, 21)] == WE


def test_egf_matches_closed_form():
    B = phylo_egf(80)
    assert B.coeffs == phylo_egf_closed_form(80).coeffs
    assert all(B[n] * math.factorial(n) == count_phylo(n) for n in range(1, 81))


@pytest.mark.parametrize("u0", [Fraction(1, 4), Fraction(1, 2), Fraction(2), Fraction(-3, 7)])
def test_two_routes_to_specialization(u0):
    F = bivariate_F(60)
    assert specialize(F, u0).coeffs == specialized_series(60, u0).coeffs


def test_half_specialization_is_egf():
    F = bivariate_F(120)
    assert specialize(F, Fraction(1, 2)).coeffs == phylo_egf(120).coeffs


def test_pn_small_values():
    F = bivariate_F(10)
    got = [pn_exact(n, F) for n in range(1, 11)]
    assert got == [1, 1, 1, Fraction(17, 25), Fraction(3, 7), Fraction(5, 21), Fraction(13, 99), P8, P9, P10]


@pytest.mark.parametrize("n", [8, pytest.param(9, marks=pytest.mark.slow)])
def test_pn_by_brute_force(n):
    from collections import Counter

    counts = Counter(shape_of(t).code for t in enumerate_phylo(n))
    total = count_phylo(n)
    p = sum(Fraction(c, total) ** 2 for c in counts.values())
    assert p == pn_exact(n, bivariate_F(n))


def test_pn_sequence_layout():
    seq = pn_sequence(12)
    assert seq[0] is None and len(seq) == 13
    assert seq[4] == Fraction(17, 25)


def test_capacity_errors():
    F = bivariate_F(10)
    with pytest.raises(CapacityError):
        pn_exact(11, F)
    with pytest.raises(CapacityError):
        phylo_egf(5)[6]


def test_labeled_scale():
    assert labeled_scale(4) == Fraction(24, 15)
    assert labeled_scale(1) == 1


def test_cache_growth_is_consistent():
    small = bivariate_F(30)
    big = bivariate_F(90)
    assert all(small.poly(n) == big.poly(n) for n in range(1, 31))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=120))
def test_poly_invariants(n):
    F = bivariate_F(120)
    poly = F.poly(n)
    assert sum(poly) == otter_numbers(n)[n]
    assert all(c >= 0 for c in poly)
    assert poly[0] == 0  # every tree with two or more leaves has a cherry, which is symmetric
    assert max(k for k, c in enumerate(poly) if c) <= n - 1
    assert F.evaluate(n, Fraction(1, 2)) * math.factorial(n) == count_phylo(n)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=2, max_value=200))
def test_pn_bounds(n):
    F = bivariate_F(200)
    p = pn_exact(n, F)
    assert Fraction(1, otter_numbers(n)[n]) <= p <= 1


def test_csv_outputs():
    F = bivariate_F(5)
    rows = F.to_csv().splitlines()
    assert rows[0] == "n,k,count"
    assert "4,3,1" in rows and "4,2,0" not in rows
    assert phylo_egf(4).to_csv().splitlines() == ["n,coefficient", "1,1", "2,1/2", "3,1/2", "4,5/8"]
