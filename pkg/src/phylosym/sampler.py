"""Exact-uniform random phylogenetic trees and Otter shapes.

Labeled trees grow by leaf insertion: a tree on leaves 1..m-1 has 2m-3
edges (the root edge included) and subdividing each one with leaf m gives
every tree on 1..m exactly once, so a uniform edge at every step yields a
uniform element of B_n.

Unlabeled shapes use the recursive method on the Wedderburn-Etherington
counts, drawing with ``randrange`` on exact integers.

The generator is Python's ``random.Random`` (MT19937), seeded with an
integer; it handles arbitrary-size integer ranges without bias.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from scipy import stats as sps

from .series import BivariateSeries, bivariate_F, otter_numbers
from .stats import sym_pmf, moments
from .trees import LEAF, OtterTree, PhyloTree, enumerate_phylo, enumerate_shapes

__all__ = [
    "RNG_NAME",
    "make_rng",
    "sample_phylo",
    "sample_otter",
    "sample_sym",
    "split_probabilities",
    "SampleReport",
    "empirical_histogram",
    "chi_square_pooled",
    "uniformity_test",
]

RNG_NAME = "python-random-MT19937"


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def _insertion_arrays(n: int, rng: random.Random):
    """Leaf-insertion tree as (left, right, label, root); -1 marks no child."""
    left, right, parent, label = [-1], [-1], [-1], [1]
    root = 0
    for m in range(2, n + 1):
        v = rng.randrange(len(parent))  # 2m - 3 edges, one above each node
        x, y = len(parent), len(parent) + 1
        p = parent[v]
        left += [v, -1]
        right += [y, -1]
        parent += [p, x]
        label += [0, m]
        parent[v] = x
        if p == -1:
            root = x
        elif left[p] == v:
            left[p] = x
        else:
            right[p] = x
    return left, right, label, root


def _postorder(left, right, root):
    order, stack = [], [root]
    while stack:
        v = stack.pop()
        order.append(v)
        if left[v] != -1:
            stack.append(left[v])
            stack.append(right[v])
    order.reverse()
    return order


def sample_phylo(n: int, rng: random.Random) -> PhyloTree:
    if n < 1:
        raise ValueError("n must be >= 1")
    left, right, label, root = _insertion_arrays(n, rng)
    built = {}
    for v in _postorder(left, right, root):
        if left[v] == -1:
            built[v] = PhyloTree.leaf(label[v])
        else:
            built[v] = PhyloTree.join(built.pop(left[v]), built.pop(right[v]))
    return built[root]


def _phylo_sym(n: int, rng: random.Random) -> int:
    left, right, _, root = _insertion_arrays(n, rng)
    ids = [0] * len(left)
    table: dict[tuple[int, int], int] = {}
    sym = 0
    for v in _postorder(left, right, root):
        a = left[v]
        if a == -1:
            continue
        i, j = ids[a], ids[right[v]]
        if i == j:
            sym += 1
        key = (i, j) if i < j else (j, i)
        ids[v] = table.setdefault(key, len(table) + 1)
    return sym


def split_probabilities(n: int, counts) -> dict[tuple[int, int], Fraction]:
    """Exact probability of each unordered root split {k, n-k}, k <= n-k."""
    out = {}
    for k in range(1, n // 2 + 1):
        if k < n - k:
            w = counts[k] * counts[n - k]
        else:
            w = counts[k] * (counts[k] + 1) // 2
        out[(k, n - k)] = Fraction(w, counts[n])
    return out


def _draw_otter(n, counts, rng, leaf, join, same):
    if n == 1:
        return leaf
    r = rng.randrange(counts[n])
    for k in range(1, (n - 1) // 2 + 1):
        w = counts[k] * counts[n - k]
        if r < w:
            return join(_draw_otter(k, counts, rng, leaf, join, same),
                        _draw_otter(n - k, counts, rng, leaf, join, same))
        r -= w
    m = n // 2
    # r is now uniform over the u_m (u_m + 1)/2 unordered pairs of size-m shapes
    if r < counts[m]:
        t = _draw_otter(m, counts, rng, leaf, join, same)
        return join(t, t)
    while True:
        a = _draw_otter(m, counts, rng, leaf, join, same)
        b = _draw_otter(m, counts, rng, leaf, join, same)
        if not same(a, b):
            return join(a, b)


def sample_otter(n: int, counts, rng: random.Random) -> OtterTree:
    """Uniform shape of size n; ``counts`` holds u_0..u_n (at least)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(counts) <= n:
        raise ValueError(f"count table stops at {len(counts) - 1} < n={n}")
    return _draw_otter(n, counts, rng, LEAF, OtterTree.join, lambda a, b: a == b)


def _otter_sym(n: int, counts, rng: random.Random) -> int:
    table: dict[tuple[int, int], int] = {}

    def join(a, b):
        i, j = a[0], b[0]
        key = (i, j) if i < j else (j, i)
        return table.setdefault(key, len(table) + 1), a[1] + b[1] + (i == j)

    return _draw_otter(n, counts, rng, (0, 0), join, lambda a, b: a[0] == b[0])[1]


def sample_sym(model: str, n: int, rng: random.Random, counts=None) -> int:
    """sym of one uniform tree, without building tree objects."""
    if model == "phylo":
        return _phylo_sym(n, rng)
    if model == "otter":
        return _otter_sym(n, counts if counts is not None else otter_numbers(n), rng)
    raise ValueError(f"unknown model {model!r}")


def chi_square_pooled(observed: dict, expected: dict[int, float]):
    """Pearson chi-square after pooling adjacent bins to expected >= 5.

    Returns (statistic, dof, p_value, pooled_bins, warning).
    """
    keys = sorted(expected)
    bins: list[list] = []
    cur_obs, cur_exp = 0, 0.0
    for k in keys:
        cur_obs += observed.get(k, 0)
        cur_exp += expected[k]
        if cur_exp >= 5:
            bins.append([cur_obs, cur_exp])
            cur_obs, cur_exp = 0, 0.0
    if cur_exp > 0 or cur_obs:
        if bins:
            bins[-1][0] += cur_obs
            bins[-1][1] += cur_exp
        else:
            bins.append([cur_obs, cur_exp])
    stray = sum(v for k, v in observed.items() if k not in expected)
    warning = None
    if any(e < 5 for _, e in bins):
        warning = "expected count below 5 after pooling"
    if stray:
        warning = f"{stray} observations outside the exact support"
    if len(bins) < 2:
        return 0.0, 0, 1.0, len(bins), warning or "single bin"
    stat = sum((o - e) ** 2 / e for o, e in bins) + (float("inf") if stray else 0.0)
    dof = len(bins) - 1
    return float(stat), dof, float(sps.chi2.sf(stat, dof)), len(bins), warning


@dataclass
class SampleReport:
    model: str
    n: int
    trials: int
    seed: int
    rng: str
    histogram: dict[int, int]
    chi2: float
    dof: int
    p_value: float
    pooled_bins: int
    warning: str | None
    sample_mean: float
    exact_mean: float
    overlay: list = field(default_factory=list)

    def to_json(self) -> str:
        d = asdict(self)
        d["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        return json.dumps(d, sort_keys=True, indent=2)

    def histogram_csv(self) -> str:
        lines = ["k,count"] + [f"{k},{c}" for k, c in sorted(self.histogram.items())]
        return "\n".join(lines) + "\n"


def empirical_histogram(model: str, n: int, trials: int, seed: int, F: BivariateSeries | None = None) -> SampleReport:
    """Histogram of sym over ``trials`` uniform trees, tested against the exact law."""
    rng = make_rng(seed)
    F = F if F is not None and F.order >= n else bivariate_F(n)
    counts = otter_numbers(n)
    hist = Counter(sample_sym(model, n, rng, counts) for _ in range(trials))
    d = sym_pmf(model, n, F)
    expected = {k: trials * float(p) for k, p in d.pmf.items()}
    stat, dof, pval, nbins, warning = chi_square_pooled(hist, expected)
    from .stats import overlay

    rows = [{"k": r["k"], "exact": r["decimal"], "gaussian": r["gaussian"],
             "observed": hist.get(r["k"], 0) / trials} for r in overlay(d)]
    return SampleReport(
        model=model, n=n, trials=trials, seed=seed, rng=RNG_NAME,
        histogram=dict(sorted(hist.items())), chi2=stat, dof=dof, p_value=pval,
        pooled_bins=nbins, warning=warning,
        sample_mean=sum(k * c for k, c in hist.items()) / trials,
        exact_mean=float(moments(d).mean), overlay=rows,
    )


def uniformity_test(model: str, n: int, trials: int, seed: int) -> dict:
    """Exhaustive chi-square of sampled trees against the uniform law on all of them."""
    rng = make_rng(seed)
    if model == "phylo":
        universe = [str(t) for t in enumerate_phylo(n)]
        draw = lambda: str(sample_phylo(n, rng))  # noqa: E731
    elif model == "otter":
        universe = [e.shape.code for e in enumerate_shapes(n)]
        counts = otter_numbers(n)
        draw = lambda: sample_otter(n, counts, rng).code  # noqa: E731
    else:
        raise ValueError(f"unknown model {model!r}")
    index = {t: i for i, t in enumerate(universe)}
    observed = [0] * len(universe)
    for _ in range(trials):
        observed[index[draw()]] += 1
    res = sps.chisquare(observed)
    return {
        "model": model, "n": n, "trials": trials, "seed": seed, "rng": RNG_NAME,
        "classes": len(universe), "chi2": float(res.statistic), "p_value": float(res.pvalue),
        "min_count": min(observed), "max_count": max(observed),
    }
