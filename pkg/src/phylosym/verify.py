"""Self-check suites behind ``phylosym verify``."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .asymptotics import NumericConfig, solve_rho, solve_rho_at, derive_sigma
from .oeis import REFERENCE
from .sampler import uniformity_test
from .series import (
    bivariate_F,
    otter_numbers,
    phylo_egf,
    phylo_egf_closed_form,
    pn_exact,
    specialized_series,
)
from .stats import coincidence_prob, extrapolate_moments, sym_pmf_labeled, sym_pmf_unlabeled
from .trees import count_phylo, enumerate_shapes

LEVELS = ("fast", "full")


@dataclass
class CheckResult:
    name: str
    module: str
    ok: bool
    detail: str
    seconds: float


def _oracle_equivalence(order):
    F = bivariate_F(12)
    u = otter_numbers(12)
    for n in range(1, 13):
        table = enumerate_shapes(n)
        poly = list(F.poly(n))
        if table.sym_counts() != poly + [0] * (len(table.sym_counts()) - len(poly)):
            return False, f"f_{n}(u) differs from the enumerated sym counts"
        if len(table) != u[n]:
            return False, f"u_{n} = {u[n]} but {len(table)} shapes enumerated"
        if table.total_labelings() != count_phylo(n):
            return False, f"labelings at n={n} do not sum to (2n-3)!!"
    return True, "n <= 12: f_n(u), u_n and sum of labelings agree with enumeration"


def _oeis_prefixes(order):
    F = bivariate_F(10)
    u = otter_numbers(10)
    checks = {
        "A001190": {n: u[n] for n in range(1, 11)},
        "A003609": {n: int(F.evaluate(n, 2)) for n in range(1, 9)},
        "A001147": {n - 1: count_phylo(n) for n in range(1, 5)},
    }
    for oid, got in checks.items():
        ref = REFERENCE[oid].prefix
        bad = [n for n in ref if got.get(n) != ref[n]]
        if bad:
            return False, f"{oid} differs at {bad}"
    return True, "A001190, A003609, A001147 prefixes match"


def _half_identity(order):
    F = bivariate_F(order)
    for n in range(1, order + 1):
        if F.evaluate(n, Fraction(1, 2)) * math.factorial(n) != count_phylo(n):
            return False, f"n! [z^n]F(z,1/2) != (2n-3)!! at n={n}"
    return True, f"n! [z^n]F(z,1/2) = (2n-3)!! for n <= {order}"


def _egf_closed_form(order):
    m = min(order, 64)
    if phylo_egf(m).coeffs != phylo_egf_closed_form(m).coeffs:
        return False, "B recursion disagrees with 1 - sqrt(1 - 2z)"
    return True, f"B recursion equals the closed form to order {m}"


def _univariate_route(order):
    m = min(order, 64)
    F = bivariate_F(m)
    alt = specialized_series(m, Fraction(1, 4))
    if any(F.evaluate(n, Fraction(1, 4)) != alt[n] for n in range(1, m + 1)):
        return False, "bivariate and univariate routes to F(z,1/4) disagree"
    return True, f"F(z,1/4) identical by both recursions to order {m}"


def _pn_small(order):
    F = bivariate_F(7)
    want = [1, 1, 1, Fraction(17, 25), Fraction(3, 7), Fraction(5, 21), Fraction(13, 99)]
    got = [pn_exact(n, F) for n in range(1, 8)]
    return got == want, f"p_1..p_7 = {[str(x) for x in got]}"


def _pmf_n4(order):
    F = bivariate_F(4)
    unl, lab = sym_pmf_unlabeled(4, F), sym_pmf_labeled(4, F)
    ok = (unl.pmf == {1: Fraction(1, 2), 3: Fraction(1, 2)}
          and lab.pmf == {1: Fraction(4, 5), 3: Fraction(1, 5)}
          and coincidence_prob(lab) == Fraction(17, 25))
    return ok, "n=4 laws and coincidence probability"


def _radii(order):
    cfg = NumericConfig(dps=30)
    r1 = solve_rho_at(1, cfg).rho
    rh = solve_rho_at(0.5, cfg).rho
    r = solve_rho(cfg).rho
    ok = abs(r1 - 0.40269) < 1e-4 and abs(rh - 0.5) < 1e-12 and r1 < r < 0.625
    return ok, f"rho1={float(r1):.10f}, rho(1/2)={float(rh)}, rho={float(r):.15f}"


def _sampler_small(order):
    res = uniformity_test("phylo", 4, 20000, seed=2009)
    return res["p_value"] > 1e-3, f"B_4 uniformity p={res['p_value']:.3g}"


def _sampler_full(order):
    a = uniformity_test("phylo", 6, 100000, seed=6)
    b = uniformity_test("otter", 10, 100000, seed=10)
    ok = a["p_value"] > 1e-3 and b["p_value"] > 1e-3
    return ok, f"B_6 p={a['p_value']:.3g}, U_10 p={b['p_value']:.3g}"


def _two_routes(order):
    F = bivariate_F(400)
    qp = derive_sigma()
    mu, s = extrapolate_moments("otter", F)
    mh, sh = extrapolate_moments("phylo", F)
    pairs = [(float(qp.mu), mu), (float(qp.sigma), s), (float(qp.mu_hat), mh), (float(qp.sigma_hat), sh)]
    ok = all(abs(x - y) <= 1e-3 * abs(x) for x, y in pairs)
    return ok, "derivative vs extrapolation: " + ", ".join(f"{x:.6f}/{y:.6f}" for x, y in pairs)


SUITES: dict[str, list[tuple[str, str, Callable]]] = {
    "fast": [
        ("oracle-equivalence", "tree-core", _oracle_equivalence),
        ("oeis-prefixes", "cli", _oeis_prefixes),
        ("half-identity", "series-engine", _half_identity),
        ("egf-closed-form", "series-engine", _egf_closed_form),
        ("univariate-route", "series-engine", _univariate_route),
        ("pn-small", "series-engine", _pn_small),
        ("pmf-n4", "symmetry-stats", _pmf_n4),
        ("radii", "asymptotics", _radii),
        ("sampler-small", "sampler", _sampler_small),
    ],
}
SUITES["full"] = SUITES["fast"] + [
    ("sampler-exhaustive", "sampler", _sampler_full),
    ("moment-routes", "asymptotics", _two_routes),
]


def run(level: str = "fast", order: int = 256) -> list[CheckResult]:
    if level not in SUITES:
        raise ValueError(f"unknown level {level!r}")
    results = []
    for name, module, fn in SUITES[level]:
        t0 = time.perf_counter()
        try:
            ok, detail = fn(order)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, module, bool(ok), detail, time.perf_counter() - t0))
    return results
