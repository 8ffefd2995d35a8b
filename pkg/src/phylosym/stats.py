"""Exact laws of the symmetrical-node count and their diagnostics.

Two models at each size n:

``otter``  uniform over unlabeled shapes; P[X = k] = [u^k] f_n(u) / u_n
``phylo``  uniform over labeled trees; a shape t carries weight
           n! 2**-sym(t) / (2n-3)!!, so P[Y = k] = (n!/(2n-3)!!) [u^k] f_n(u) 2**-k
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._fmt import dec_str, frac_str
from .errors import CapacityError, DegenerateDistributionError
from .series import BivariateSeries, labeled_scale

__all__ = [
    "MODELS",
    "SymDistribution",
    "MomentSummary",
    "ExtrapolationConfig",
    "sym_pmf_unlabeled",
    "sym_pmf_labeled",
    "sym_pmf",
    "moments",
    "coincidence_prob",
    "local_limit_deviation",
    "coincidence_asymptotic",
    "gaussian_density",
    "overlay",
    "richardson",
    "extrapolate_moments",
    "GAUSSIAN_K",
]

MODELS = ("otter", "phylo")

# integral of the squared standard normal density
GAUSSIAN_K = 1.0 / (2.0 * math.sqrt(math.pi))


@dataclass(frozen=True)
class SymDistribution:
    model: str
    n: int
    pmf: dict[int, Fraction]

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")

    def support(self) -> list[int]:
        return sorted(k for k, p in self.pmf.items() if p)

    def prob(self, k: int) -> Fraction:
        return self.pmf.get(k, Fraction(0))

    def to_csv(self, digits: int = 15) -> str:
        lines = ["k,probability,probability_decimal"]
        for k in sorted(self.pmf):
            p = self.pmf[k]
            lines.append(f"{k},{frac_str(p)},{dec_str(p, digits)}")
        return "\n".join(lines) + "\n"

    def to_json(self, digits: int = 15) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "pmf": [
                {"k": k, "exact": frac_str(p), "decimal": dec_str(p, digits)}
                for k, p in sorted(self.pmf.items())
            ],
        }


@dataclass(frozen=True)
class MomentSummary:
    n: int
    mean: Fraction
    variance: Fraction

    @property
    def mean_per_n(self) -> float:
        return float(self.mean / self.n)

    @property
    def variance_per_n(self) -> float:
        return float(self.variance / self.n)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mean": frac_str(self.mean),
            "variance": frac_str(self.variance),
            "mean_per_n": self.mean_per_n,
            "variance_per_n": self.variance_per_n,
        }


def _check_order(F: BivariateSeries, n: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if F.order < n:
        raise CapacityError(f"size {n} needs a series of order >= {n}, got {F.order}")


def sym_pmf_unlabeled(n: int, F: BivariateSeries) -> SymDistribution:
    _check_order(F, n)
    poly = F.poly(n)
    total = sum(poly)
    return SymDistribution("otter", n, {k: Fraction(c, total) for k, c in enumerate(poly) if c})


def sym_pmf_labeled(n: int, F: BivariateSeries) -> SymDistribution:
    _check_order(F, n)
    scale = labeled_scale(n)
    pmf = {k: scale * Fraction(c, 1 << k) for k, c in enumerate(F.poly(n)) if c}
    return SymDistribution("phylo", n, pmf)


def sym_pmf(model: str, n: int, F: BivariateSeries) -> SymDistribution:
    if model == "otter":
        return sym_pmf_unlabeled(n, F)
    if model == "phylo":
        return sym_pmf_labeled(n, F)
    raise ValueError(f"unknown model {model!r}")


def moments(d: SymDistribution) -> MomentSummary:
    mean = sum((k * p for k, p in d.pmf.items()), Fraction(0))
    second = sum((k * k * p for k, p in d.pmf.items()), Fraction(0))
    return MomentSummary(d.n, mean, second - mean * mean)


def coincidence_prob(d: SymDistribution) -> Fraction:
    """Probability that two independent draws share the same sym value."""
    return sum((p * p for p in d.pmf.values()), Fraction(0))


def gaussian_density(x):
    return np.exp(-0.5 * np.square(x)) / math.sqrt(2.0 * math.pi)


def local_limit_deviation(d: SymDistribution) -> float:
    """max over the support of |sigma_n P[k] - g((k - mu_n)/sigma_n)|.

    g is evaluated at the lattice points themselves (no continuity
    correction), in double precision.
    """
    m = moments(d)
    if m.variance == 0:
        raise DegenerateDistributionError(f"{d.model} law at n={d.n} has zero variance")
    mu, sigma = float(m.mean), math.sqrt(float(m.variance))
    ks = np.array(sorted(d.pmf), dtype=float)
    ps = np.array([float(d.pmf[int(k)]) for k in ks])
    return float(np.max(np.abs(sigma * ps - gaussian_density((ks - mu) / sigma))))


def coincidence_asymptotic(n: int, sigma: float) -> float:
    """Gaussian prediction K / (sigma sqrt(n)) with K = 1/(2 sqrt(pi))."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return GAUSSIAN_K / (sigma * math.sqrt(n))


def overlay(d: SymDistribution, digits: int = 15) -> list[dict]:
    """Histogram rows with the matching Gaussian density for plotting."""
    m = moments(d)
    sd = math.sqrt(float(m.variance)) if m.variance else 0.0
    rows = []
    for k in sorted(d.pmf):
        p = d.pmf[k]
        g = float(gaussian_density((k - float(m.mean)) / sd) / sd) if sd else float("nan")
        rows.append({"k": k, "exact": frac_str(p), "decimal": dec_str(p, digits), "gaussian": g})
    return rows


def richardson(ns: Sequence[int], values: Sequence[float], terms: int = 3) -> float:
    """Limit of values(n) assuming c0 + c1/n + ... + c_{terms-1}/n^{terms-1}."""
    if len(ns) < terms:
        raise ValueError(f"need at least {terms} points, got {len(ns)}")
    x = 1.0 / np.asarray(ns, dtype=float)
    coef = np.polynomial.polynomial.polyfit(x, np.asarray(values, dtype=float), terms - 1)
    return float(coef[0])


@dataclass(frozen=True)
class ExtrapolationConfig:
    ns: tuple[int, ...] = field(default_factory=lambda: tuple(range(200, 401, 25)))
    terms: int = 4


def extrapolate_moments(
    model: str, F: BivariateSeries, config: ExtrapolationConfig | None = None
) -> tuple[float, float]:
    """(mu, sigma) as n -> oo from exact finite-n mean/n and variance/n."""
    config = config or ExtrapolationConfig()
    ms = [moments(sym_pmf(model, n, F)) for n in config.ns]
    mu = richardson(config.ns, [m.mean_per_n for m in ms], config.terms)
    var = richardson(config.ns, [m.variance_per_n for m in ms], config.terms)
    return mu, math.sqrt(var)


def moment_table(model: str, F: BivariateSeries, ns: Iterable[int]) -> list[MomentSummary]:
    return [moments(sym_pmf(model, n, F)) for n in ns]
