"""Singularity analysis of F(z, u) in multiprecision floating point.

The functional equation solved for F reads

    F(z, u) = 1 - sqrt(1 - 2z - (2u - 1) F(z**2, u**2)),

so F(z, u) can be evaluated by unrolling the square roots until z**(2**d)
is negligible ("continued square root").  The dominant singularity rho(u)
of z -> F(z, u) is where the radicand vanishes:

    Phi(r, u) = 1 - 2r - (2u - 1) F(r**2, u**2) = 0.

At u = 1/4 this is the radius rho governing p_n; at u = 1 it is the radius
of the Otter series; at u = 1/2 it degenerates to r = 1/2.

All routines take a :class:`NumericConfig`; every result records the
working precision it was produced with.  See README "Derivations" for the
formulas behind :func:`constant_a`, :func:`constant_c1` and
:func:`derive_sigma`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mp, mpf

from .errors import BracketError, PastSingularityError, PrecisionError
from .series import BivariateSeries, labeled_scale, otter_numbers

__all__ = [
    "NumericConfig",
    "SingularityResult",
    "AsymptoticConstants",
    "C1Fit",
    "QuasiPowers",
    "eval_F_numeric",
    "eval_F_jet",
    "eval_F_series",
    "singular_equation",
    "solve_rho",
    "solve_rho_at",
    "constant_a",
    "constant_c1",
    "fit_c1",
    "asymptotic_pn",
    "accuracy_report",
    "threshold_check",
    "growth_rates",
    "growth_rate_estimates",
    "derive_sigma",
    "compute_constants",
    "CLAIMED_THRESHOLDS",
]

# (relative accuracy, from size n0 on) claimed for the truncated expansion
CLAIMED_THRESHOLDS = ((1e-2, 5), (1e-4, 38), (1e-5, 47))

# radius of the Otter series, used only for tail estimates
_RHO1_ROUGH = 0.4026975


@dataclass(frozen=True)
class NumericConfig:
    dps: int = 40
    bisection_steps: int = 60
    newton_steps: int = 12
    bracket: tuple[float, float] = (0.0, 0.7)
    rho_bracket: tuple[float, float] = (0.4, 0.625)
    deriv_step: float = 1e-10
    deriv_tol: float = 1e-12
    c1_window: tuple[int, int] = (100, 250)

    @property
    def eps(self) -> mpf:
        return mpf(10) ** (-self.dps)


@dataclass(frozen=True)
class SingularityResult:
    u: mpf
    rho: mpf
    residual: mpf
    depth: int
    dps: int
    last_step: mpf

    @property
    def precision(self) -> float:
        """Size of the final Newton correction, a proxy for the error in rho."""
        return float(max(abs(self.last_step), abs(self.residual), mpf(10) ** -self.dps))


@dataclass(frozen=True)
class C1Fit:
    c1: float
    c2: float | None
    rms: float
    window: tuple[int, int]


@dataclass(frozen=True)
class QuasiPowers:
    mu: mpf
    sigma: mpf
    mu_hat: mpf
    sigma_hat: mpf
    precision: float


@dataclass(frozen=True)
class AsymptoticConstants:
    rho: mpf
    b: mpf
    a: mpf
    c1: float
    c1_analytic: mpf
    notes: dict = field(default_factory=dict)


def _levels(z, u, eps):
    levels = []
    while abs(z) > eps:
        levels.append((z, u))
        z, u = z * z, u * u
    return levels


def eval_F_jet(z, u, config: NumericConfig | None = None) -> tuple[mpf, mpf, mpf]:
    """(F, dF/dz, d2F/dz2) at (z, u) by the unrolled square roots.

    The innermost F(z**(2**d), .) is replaced by 0 once z**(2**d) drops
    below 10**-(dps + 5); the omitted term is of that size.
    """
    config = config or NumericConfig()
    with mp.workdps(config.dps + 10):
        z, u = mpf(z), mpf(u)
        levels = _levels(z, u, config.eps * mpf(10) ** -5)
        val = d1 = d2 = mpf(0)
        for zz, uu in reversed(levels):
            c = 2 * uu - 1
            R = 1 - 2 * zz - c * val
            if R <= 0:
                raise PastSingularityError(
                    f"radicand {mpmath.nstr(R, 5)} <= 0 at z={mpmath.nstr(zz, 10)}, u={mpmath.nstr(uu, 10)}"
                )
            s = mpmath.sqrt(R)
            R1 = -2 - c * 2 * zz * d1
            R2 = -c * (2 * d1 + 4 * zz * zz * d2)
            val, d1, d2 = 1 - s, -R1 / (2 * s), -(R2 / (2 * s) - R1 * R1 / (4 * s**3))
        return +val, +d1, +d2


def eval_F_numeric(z, u, config: NumericConfig | None = None) -> mpf:
    """F(z, u) by the continued square root."""
    return eval_F_jet(z, u, config)[0]


@lru_cache(maxsize=32)
def _specialized_coeffs(F: BivariateSeries, u: Fraction) -> tuple[Fraction, ...]:
    return tuple(F.evaluate(n, u) for n in range(1, F.order + 1))


def eval_F_series(z, u, F: BivariateSeries, config: NumericConfig | None = None) -> tuple[mpf, float]:
    """Truncated exact series sum and a geometric tail estimate.

    The tail bound uses f_n(u) <= max(1, u)**n u_n and u_{n+1}/u_n < 1/rho_1;
    it is an estimate, not a rigorous bound.
    """
    config = config or NumericConfig()
    coeffs = _specialized_coeffs(F, Fraction(u).limit_denominator(1 << 60))
    with mp.workdps(config.dps + 10):
        z = mpf(z)
        total = mpf(0)
        zn = mpf(1)
        for c in coeffs:
            zn *= z
            total += mpf(c.numerator) / c.denominator * zn
        r = abs(float(z)) * max(1.0, float(u)) / _RHO1_ROUGH
        last = abs(float(coeffs[-1])) * abs(float(z)) ** len(coeffs)
        tail = last * r / (1 - r) if r < 1 else math.inf
        return +total, tail


def singular_equation(r, u, config: NumericConfig | None = None) -> tuple[mpf, mpf, int]:
    """Phi(r, u), dPhi/dr and the unrolling depth used."""
    config = config or NumericConfig()
    with mp.workdps(config.dps + 10):
        r, u = mpf(r), mpf(u)
        c = 2 * u - 1
        if c == 0:
            return 1 - 2 * r, mpf(-2), 0
        val, d1, _ = eval_F_jet(r * r, u * u, config)
        depth = len(_levels(r * r, u * u, config.eps * mpf(10) ** -5))
        return 1 - 2 * r - c * val, -2 - c * 2 * r * d1, depth


def _sign(r, u, config) -> int:
    try:
        phi = singular_equation(r, u, config)[0]
    except PastSingularityError:
        return -1
    return 1 if phi > 0 else -1


def solve_rho_at(u, config: NumericConfig | None = None, bracket: Sequence[float] | None = None) -> SingularityResult:
    """Smallest positive root of Phi(., u): bisection, then Newton polish.

    An inner evaluation failure counts as "past the root" during bisection.
    """
    config = config or NumericConfig()
    lo, hi = bracket if bracket is not None else config.bracket
    with mp.workdps(config.dps + 10):
        u = mpf(u)
        lo, hi = mpf(lo), mpf(hi)
        if _sign(lo, u, config) < 0 or _sign(hi, u, config) > 0:
            raise BracketError(f"[{lo}, {hi}] does not bracket rho({u})")
        for _ in range(config.bisection_steps):
            mid = (lo + hi) / 2
            if _sign(mid, u, config) > 0:
                lo = mid
            else:
                hi = mid
        r = (lo + hi) / 2
        step = hi - lo
        for _ in range(config.newton_steps):
            phi, dphi, _ = singular_equation(r, u, config)
            step = phi / dphi
            r -= step
            if abs(step) < config.eps:
                break
        if not lo - (hi - lo) <= r <= hi + (hi - lo):
            raise BracketError(f"Newton left the bisection bracket for u={u}")
        phi, _, depth = singular_equation(r, u, config)
    return SingularityResult(u, r, phi, depth, config.dps, step)


def solve_rho(config: NumericConfig | None = None) -> SingularityResult:
    """The radius rho of f(z) = F(z, 1/4), searched in (0.4, 0.625)."""
    config = config or NumericConfig()
    return solve_rho_at(mpf(1) / 4, config, bracket=config.rho_bracket)


def _G_derivs(rho, config):
    # G(z) = 1 - 2z + F(z^2, 1/16)/2, the radicand of f at u = 1/4
    _, d1, d2 = eval_F_jet(rho * rho, mpf(1) / 16, config)
    g1 = -2 + rho * d1
    g2 = d1 + 2 * rho * rho * d2
    return g1, g2


def constant_a(rho: SingularityResult | None = None, config: NumericConfig | None = None, *, finite_difference: bool = False) -> mpf:
    """Leading constant a of p_n ~ a (4 rho)**-n n**(3/2).

    a = 2 sqrt(pi) sqrt(-rho G'(rho)); G'(rho) uses dF/dz from the jet, or a
    numerical derivative of the evaluator when ``finite_difference`` is set.
    """
    config = config or NumericConfig()
    rho = rho or solve_rho(config)
    with mp.workdps(config.dps + 10):
        r = rho.rho
        if finite_difference:
            h = mpf(10) ** (-(config.dps // 4))
            dF = mpmath.diff(lambda w: eval_F_numeric(w, mpf(1) / 16, config), r * r, h=h)
            g1 = -2 + r * dF
        else:
            g1, _ = _G_derivs(r, config)
        return +(2 * mpmath.sqrt(mp.pi) * mpmath.sqrt(-r * g1))


def constant_c1(rho: SingularityResult | None = None, config: NumericConfig | None = None) -> mpf:
    """First correction c1 = -3/8 + (3/8) rho G''(rho)/G'(rho)."""
    config = config or NumericConfig()
    rho = rho or solve_rho(config)
    with mp.workdps(config.dps + 10):
        g1, g2 = _G_derivs(rho.rho, config)
        return +(mpf(-3) / 8 + mpf(3) / 8 * rho.rho * g2 / g1)


def _to_mpf(x):
    x = Fraction(x)
    return mpf(x.numerator) / x.denominator


def _scaled_residuals(pn, a, b, ns):
    out = []
    for n in ns:
        out.append(float(_to_mpf(pn[n]) * mpf(b) ** n / mpf(n) ** 1.5 / a - 1))
    return np.array(out)


def fit_c1(pn, a, b, window: tuple[int, int] = (100, 250), with_c2: bool = True, config: NumericConfig | None = None) -> C1Fit:
    """Least squares of p_n b**n n**-1.5 / a - 1 on c1/n (+ c2/n**2)."""
    config = config or NumericConfig()
    lo, hi = window
    ns = list(range(lo, hi + 1))
    if len(ns) < 10:
        raise ValueError(f"window {window} has fewer than 10 points")
    with mp.workdps(config.dps + 10):
        y = _scaled_residuals(pn, mpf(a), mpf(b), ns)
    x = 1.0 / np.array(ns, dtype=float)
    design = np.stack([x, x * x], axis=1) if with_c2 else x[:, None]
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    rms = float(np.sqrt(np.mean((design @ coef - y) ** 2)))
    return C1Fit(float(coef[0]), float(coef[1]) if with_c2 else None, rms, (lo, hi))


def asymptotic_pn(n: int, a, b, c1) -> mpf:
    """a b**-n n**(3/2) (1 + c1/n)."""
    return mpf(a) * mpf(b) ** (-n) * mpf(n) ** 1.5 * (1 + mpf(c1) / n)


def accuracy_report(pn, a, b, c1, max_n: int, min_n: int = 2, config: NumericConfig | None = None) -> list[dict]:
    """Per-n relative error of the truncated expansion against exact p_n."""
    config = config or NumericConfig()
    rows = []
    with mp.workdps(config.dps + 10):
        for n in range(min_n, max_n + 1):
            exact = _to_mpf(pn[n])
            approx = asymptotic_pn(n, a, b, c1)
            rows.append({"n": n, "exact": exact, "approx": approx, "rel_error": float(abs(approx / exact - 1))})
    return rows


def threshold_check(rows: list[dict], thresholds=CLAIMED_THRESHOLDS) -> list[dict]:
    out = []
    for tol, n0 in thresholds:
        sel = [r for r in rows if r["n"] >= n0]
        bad = [r["n"] for r in sel if r["rel_error"] >= tol]
        out.append({
            "tolerance": tol,
            "from_n": n0,
            "ok": not bad,
            "violations": bad,
            "max_rel_error": max(r["rel_error"] for r in sel) if sel else None,
        })
    return out


def growth_rates(config: NumericConfig | None = None) -> tuple[mpf, mpf]:
    """(unlabeled, labeled) exponential rates of the expected 2**sym.

    Unlabeled: rho(1)/rho(2).  Labeled: 1/(2 rho(1)).
    """
    config = config or NumericConfig()
    rho1 = solve_rho_at(1, config).rho
    rho2 = solve_rho_at(2, config).rho
    with mp.workdps(config.dps):
        return +(rho1 / rho2), +(1 / (2 * rho1))


def growth_rate_estimates(F: BivariateSeries, n: int, m: int | None = None) -> dict:
    """Rate estimates from exact expectations of 2**sym at sizes m < n.

    ``nth_root`` is E_n**(1/n); ``two_point`` is (E_n/E_m)**(1/(n-m)), the
    n-th root with the polynomial and constant factors divided out.
    """
    m = m if m is not None else n // 2
    u = otter_numbers(F.order)

    def unlabeled(k):
        return F.evaluate(k, 2) / u[k]

    def labeled(k):
        return labeled_scale(k) * u[k]

    out = {}
    with mp.workdps(30):
        for name, E in (("unlabeled", unlabeled), ("labeled", labeled)):
            en, em = _to_mpf(E(n)), _to_mpf(E(m))
            out[name] = {
                "nth_root": float(en ** (mpf(1) / n)),
                "two_point": float((en / em) ** (mpf(1) / (n - m))),
            }
    return out


def _log_rho_derivs(base, config):
    """First and second derivative of s -> log rho(base e**s) at s = 0, at two steps."""
    results = []
    for h in (mpf(config.deriv_step), 2 * mpf(config.deriv_step)):
        f0 = mpmath.log(solve_rho_at(base, config).rho)
        fp = mpmath.log(solve_rho_at(base * mpmath.exp(h), config).rho)
        fm = mpmath.log(solve_rho_at(base * mpmath.exp(-h), config).rho)
        results.append(((fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h)))
    (d1a, d2a), (d1b, d2b) = results
    spread = float(max(abs(d1a - d1b), abs(d2a - d2b)))
    if spread > config.deriv_tol:
        raise PrecisionError(f"log rho derivatives unstable at base {base}: spread {spread:.3g}")
    return d1a, d2a, spread


def derive_sigma(config: NumericConfig | None = None) -> QuasiPowers:
    """Mean and variance constants from the quasi-power (rho(1)/rho(u))**n.

    With L(s) = log rho(base e**s): mu = -L'(0), sigma**2 = -L''(0); base 1
    for unlabeled shapes and base 1/2 for labeled trees.
    """
    config = config or NumericConfig()
    with mp.workdps(config.dps + 10):
        d1, d2, e1 = _log_rho_derivs(mpf(1), config)
        h1, h2, e2 = _log_rho_derivs(mpf(1) / 2, config)
        return QuasiPowers(-d1, mpmath.sqrt(-d2), -h1, mpmath.sqrt(-h2), max(e1, e2))


def compute_constants(pn=None, config: NumericConfig | None = None) -> dict:
    """Every constant with a precision estimate, as plain JSON-ready values."""
    config = config or NumericConfig()
    from .series import bivariate_F, pn_sequence

    if pn is None:
        pn = pn_sequence(config.c1_window[1], bivariate_F(config.c1_window[1]))
    rho = solve_rho(config)
    rho1 = solve_rho_at(1, config)
    rho2 = solve_rho_at(2, config)
    a = constant_a(rho, config)
    a_fd = constant_a(rho, config, finite_difference=True)
    b = 4 * rho.rho
    fit = fit_c1(pn, a, b, config.c1_window, config=config)
    c1 = constant_c1(rho, config)
    qp = derive_sigma(config)
    with mp.workdps(config.dps):
        unl, lab = rho1.rho / rho2.rho, 1 / (2 * rho1.rho)

    def entry(value, precision):
        return {"value": float(value), "digits": mpmath.nstr(value, 20), "precision": float(precision)}

    return {
        "rho": entry(rho.rho, rho.precision),
        "b": entry(b, 4 * rho.precision),
        "a": entry(a, abs(a - a_fd)),
        "c1": {"value": fit.c1, "precision": abs(fit.c1 - float(c1)), "window": list(fit.window), "c2": fit.c2},
        "c1_analytic": entry(c1, rho.precision * 10),
        "mu": entry(qp.mu, qp.precision),
        "sigma": entry(qp.sigma, qp.precision),
        "mu_hat": entry(qp.mu_hat, qp.precision),
        "sigma_hat": entry(qp.sigma_hat, qp.precision),
        "rho1": entry(rho1.rho, rho1.precision),
        "rho2": entry(rho2.rho, rho2.precision),
        "rates": {
            "unlabeled": entry(unl, rho1.precision + rho2.precision),
            "labeled": entry(lab, rho1.precision),
        },
        "K": {"value": 1 / (2 * math.sqrt(math.pi)), "precision": 1e-16},
        "working_dps": config.dps,
    }
