from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from phylosym.sampler import (
    RNG_NAME,
    chi_square_pooled,
    empirical_histogram,
    make_rng,
    sample_otter,
    sample_phylo,
    sample_sym,
    split_probabilities,
    uniformity_test,
)
from phylosym.series import bivariate_F, otter_numbers
from phylosym.stats import sym_pmf
from phylosym.trees import shape_of, sym_count


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=60), st.integers(min_value=0, max_value=2**32))
def test_phylo_sample_is_valid(n, seed):
    t = sample_phylo(n, make_rng(seed))
    t.validate()
    assert t.n == n


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=60), st.integers(min_value=0, max_value=2**32))
def test_fast_sym_matches_tree(n, seed):
    # the array-only paths draw the same random numbers as the tree builders
    t = sample_phylo(n, make_rng(seed))
    assert sample_sym("phylo", n, make_rng(seed)) == sym_count(shape_of(t))
    counts = otter_numbers(n)
    s = sample_otter(n, counts, make_rng(seed))
    assert s.size == n
    assert sample_sym("otter", n, make_rng(seed), counts) == s.sym


def test_split_probabilities_sum_to_one():
    counts = otter_numbers(30)
    for n in range(2, 31):
        probs = split_probabilities(n, counts)
        assert sum(probs.values()) == 1
    assert split_probabilities(4, counts) == {(1, 3): Fraction(1, 2), (2, 2): Fraction(1, 2)}


def test_sampler_argument_errors():
    with pytest.raises(ValueError):
        sample_phylo(0, make_rng(1))
    with pytest.raises(ValueError):
        sample_otter(12, otter_numbers(10), make_rng(1))
    with pytest.raises(ValueError):
        sample_sym("yule", 5, make_rng(1))


def test_chi_square_pooling():
    expected = {0: 1.0, 1: 2.0, 2: 50.0, 3: 45.0, 4: 1.5, 5: 0.5}
    observed = {0: 1, 1: 2, 2: 50, 3: 45, 4: 1, 5: 1}
    stat, dof, p, nbins, warning = chi_square_pooled(observed, expected)
    assert nbins == 2 and dof == 1
    assert p > 0.5 and warning is None
    _, _, p1, nb1, w1 = chi_square_pooled({0: 10}, {0: 10.0})
    assert (p1, nb1, w1) == (1.0, 1, "single bin")
    _, _, p2, _, w2 = chi_square_pooled({0: 40, 9: 1}, {0: 20.0, 1: 21.0})
    assert p2 == 0.0 and "outside" in w2


def test_phylo_uniform_b4():
    res = uniformity_test("phylo", 4, 30000, seed=3)
    assert res["classes"] == 15
    assert res["p_value"] > 1e-3


def test_otter_uniform_u8():
    res = uniformity_test("otter", 8, 30000, seed=3)
    assert res["classes"] == 23
    assert res["p_value"] > 1e-3


def test_detects_a_biased_histogram():
    # 800 extra draws on the smallest value must be rejected
    rng = make_rng(0)
    counts = Counter(sample_sym("phylo", 6, rng) for _ in range(4000))
    counts[min(counts)] += 800
    d = sym_pmf("phylo", 6, bivariate_F(6))
    total = sum(counts.values())
    _, _, p, _, _ = chi_square_pooled(counts, {k: total * float(q) for k, q in d.pmf.items()})
    assert p < 1e-6


@pytest.mark.parametrize("model", ["otter", "phylo"])
def test_histogram_report(model):
    rep = empirical_histogram(model, 40, 4000, seed=5)
    assert rep.rng == RNG_NAME
    assert sum(rep.histogram.values()) == 4000
    assert rep.p_value > 1e-3
    assert abs(rep.sample_mean - rep.exact_mean) < 0.2
    assert rep.to_json() == empirical_histogram(model, 40, 4000, seed=5).to_json()
    assert rep.to_json() != empirical_histogram(model, 40, 4000, seed=6).to_json()
    assert rep.histogram_csv().startswith("k,count\n")


@pytest.mark.slow
@pytest.mark.parametrize("model", ["otter", "phylo"])
def test_histogram_large_n(model):
    rep = empirical_histogram(model, 100, 20000, seed=2009)
    assert rep.p_value > 1e-3
