import math
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from phylosym.errors import CapacityError, SizeMismatchError
from phylosym.trees import (
    LEAF,
    OtterTree,
    PhyloTree,
    canonicalize,
    count_phylo,
    double_factorial,
    enumerate_phylo,
    enumerate_shapes,
    isomorphic,
    labeling_count,
    parse_shape,
    shape_of,
    sym_count,
)

WE = [1, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451, 983]


def raw_trees(max_leaves=12):
    # nested 2-tuples of leaf markers
    return st.recursive(st.just(0), lambda kids: st.tuples(kids, kids), max_leaves=max_leaves)


def swap_random(raw, flips):
    if not isinstance(raw, tuple):
        return raw
    a, b = swap_random(raw[0], flips), swap_random(raw[1], flips)
    return (b, a) if flips.draw(st.booleans()) else (a, b)


def size(raw):
    return 1 if not isinstance(raw, tuple) else size(raw[0]) + size(raw[1])


@given(raw_trees())
def test_canonicalize_idempotent(raw):
    t = canonicalize(raw)
    assert canonicalize(t) == t
    assert canonicalize(t.code) == t
    assert parse_shape(t.code) == t


@given(raw_trees(), st.data())
def test_canonical_form_ignores_child_order(raw, data):
    assert canonicalize(swap_random(raw, data)) == canonicalize(raw)


@given(raw_trees())
def test_sym_bounds_and_labelings(raw):
    t = canonicalize(raw)
    n = size(raw)
    assert t.size == n
    assert 0 <= sym_count(t) <= n - 1
    assert labeling_count(t) * 2 ** sym_count(t) == math.factorial(n)


def test_small_shapes():
    cherry = parse_shape("(oo)")
    assert sym_count(cherry) == 1
    assert labeling_count(cherry) == 1
    balanced = parse_shape("((oo)(oo))")
    assert sym_count(balanced) == 3
    assert labeling_count(balanced) == 3
    caterpillar = parse_shape("(o(o(oo)))")
    assert sym_count(caterpillar) == 1
    assert labeling_count(caterpillar) == 12


def test_leaf():
    assert LEAF.size == 1 and LEAF.is_leaf
    assert sym_count(LEAF) == 0
    assert str(canonicalize("o")) == "o"


def test_join_is_order_free():
    a, b = parse_shape("(oo)"), LEAF
    assert OtterTree.join(a, b) == OtterTree.join(b, a)


@pytest.mark.parametrize("n", range(1, 13))
def test_shape_counts(n):
    table = enumerate_shapes(n)
    assert len(table) == WE[n - 1]
    assert len({e.shape for e in table}) == len(table)
    assert table.total_labelings() == count_phylo(n)


def test_enumeration_capacity():
    with pytest.raises(CapacityError):
        enumerate_shapes(21)
    with pytest.raises(CapacityError):
        enumerate_phylo(10)


def test_double_factorial():
    assert [double_factorial(m) for m in (-1, 1, 3, 5, 7)] == [1, 1, 3, 15, 105]
    assert [count_phylo(n) for n in range(1, 7)] == [1, 1, 3, 15, 105, 945]


@pytest.mark.parametrize("n", range(1, 8))
def test_phylo_enumeration(n):
    trees = enumerate_phylo(n)
    assert len(trees) == count_phylo(n)
    assert len({str(t) for t in trees}) == len(trees)
    for t in trees[:50]:
        t.validate()
        assert sorted(t.labels()) == list(range(1, n + 1))


@pytest.mark.parametrize("n", range(2, 8))
def test_labeled_trees_per_shape(n):
    per_shape = Counter(shape_of(t) for t in enumerate_phylo(n))
    for e in enumerate_shapes(n):
        assert per_shape[e.shape] == e.labelings


def test_phylo_parsing_and_isomorphism():
    t1 = PhyloTree.from_string("((1,2),(3,4))")
    t2 = PhyloTree.from_string("((4,1),(3,2))")
    t3 = PhyloTree.from_string("(1,(2,(3,4)))")
    assert t1.n == 4
    assert PhyloTree.from_string("((2,1),(4,3))") == t1
    assert isomorphic(t1, t2)
    assert not isomorphic(t1, t3)
    with pytest.raises(SizeMismatchError):
        isomorphic(t1, PhyloTree.from_string("(1,2)"))


@pytest.mark.parametrize("bad", ["((1,2),(2,3))", "(1,2", "(1,,2)", "((1,2),(3,5))"])
def test_phylo_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        PhyloTree.from_string(bad).validate()


@pytest.mark.parametrize("bad", ["(o)", "(ooo)", "(oo", "x"])
def test_shape_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        parse_shape(bad)


@settings(max_examples=50)
@given(st.permutations(range(1, 7)))
def test_relabeling_preserves_shape(perm):
    t = PhyloTree.from_string("((1,(2,3)),((4,5),6))")
    text = str(t)
    for old, new in zip(range(1, 7), perm):
        text = text.replace(str(old), chr(ord("a") + new - 1))
    for i in range(6):
        text = text.replace(chr(ord("a") + i), str(i + 1))
    assert isomorphic(t, PhyloTree.from_string(text))
