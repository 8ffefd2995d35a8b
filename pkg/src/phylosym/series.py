"""Exact truncated power series for the three tree functional equations.

Coefficient recursions, all exact:

* ``B = z + B**2/2`` (labeled trees, exponential)
* ``U = z + (U**2 + U(z**2))/2`` (unlabeled shapes)
* ``F = z + F**2/2 + (u - 1/2) F(z**2, u**2)`` (shapes, ``u`` marking
  symmetrical nodes)

The bivariate coefficients ``f_n(u)`` are integer polynomials of degree at
most ``n - 1``.  Their products are done by Kronecker substitution: a
polynomial is packed into one big integer with a fixed-width slot per
coefficient, so each polynomial product is a single GMP multiplication.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpz

from ._fmt import dec_str, frac_str
from .errors import CapacityError
from .trees import double_factorial

__all__ = [
    "DEFAULT_ORDER",
    "RationalSeries",
    "BivariateSeries",
    "phylo_egf",
    "phylo_egf_closed_form",
    "otter_numbers",
    "otter_series",
    "bivariate_F",
    "specialize",
    "specialized_series",
    "pn_exact",
    "pn_sequence",
    "labeled_scale",
]

DEFAULT_ORDER = 256


@dataclass(frozen=True)
class RationalSeries:
    """Coefficients of z^0..z^N; ``coeffs[0]`` is the (zero) constant term."""

    coeffs: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        if not 0 <= n <= self.order:
            raise CapacityError(f"coefficient {n} requested from a series of order {self.order}")
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def to_csv(self, decimals: int | None = None, header: str = "coefficient") -> str:
        cols = ["n", header] + ([f"{header}_decimal"] if decimals else [])
        lines = [",".join(cols)]
        for n in range(1, self.order + 1):
            row = [str(n), frac_str(self.coeffs[n])]
            if decimals:
                row.append(dec_str(self.coeffs[n], decimals))
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BivariateSeries:
    """``polys[n]`` lists the integer coefficients of f_n(u) by power of u."""

    polys: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.polys) - 1

    def poly(self, n: int) -> tuple[int, ...]:
        if not 1 <= n <= self.order:
            raise CapacityError(f"f_{n} requested from a series of order {self.order}")
        return self.polys[n]

    def evaluate(self, n: int, u0) -> Fraction:
        """f_n(u0), exact."""
        return _eval_poly(self.poly(n), Fraction(u0))

    def to_csv(self) -> str:
        lines = ["n,k,count"]
        for n in range(1, self.order + 1):
            for k, c in enumerate(self.polys[n]):
                if c:
                    lines.append(f"{n},{k},{c}")
        return "\n".join(lines) + "\n"


def _eval_poly(coeffs, u0: Fraction) -> Fraction:
    p, q = u0.numerator, u0.denominator
    d = len(coeffs) - 1
    num, pk, qk = 0, 1, q**d
    for c in coeffs:
        if c:
            num += c * pk * qk
        pk *= p
        qk //= q
    return Fraction(num, q**d)


def phylo_egf(N: int) -> RationalSeries:
    """[z^n]B = (2n-3)!!/n! from the quadratic recursion."""
    if N < 1:
        raise ValueError("order must be >= 1")
    c = [Fraction(0)] * (N + 1)
    c[1] = Fraction(1)
    for n in range(2, N + 1):
        s = sum(c[k] * c[n - k] for k in range(1, (n + 1) // 2))
        if n % 2 == 0:
            s += c[n // 2] ** 2 / 2
        c[n] = s
    return RationalSeries(tuple(c))


def phylo_egf_closed_form(N: int) -> RationalSeries:
    """Coefficients of 1 - sqrt(1 - 2z) via the generalized binomial theorem."""
    c = [Fraction(0)] * (N + 1)
    binom = Fraction(1)  # binom(1/2, n), built incrementally
    for n in range(1, N + 1):
        binom *= (Fraction(1, 2) - (n - 1)) / n
        c[n] = -binom * (-2) ** n
    return RationalSeries(tuple(c))


@lru_cache(maxsize=8)
def _otter_numbers(N: int) -> tuple[int, ...]:
    u = [0] * (N + 1)
    if N >= 1:
        u[1] = 1
    for n in range(2, N + 1):
        s = sum(u[k] * u[n - k] for k in range(1, (n + 1) // 2))
        if n % 2 == 0:
            m = u[n // 2]
            s += m * (m + 1) // 2
        u[n] = s
    return tuple(u)


def otter_numbers(N: int) -> tuple[int, ...]:
    """Wedderburn-Etherington numbers u_0..u_N (u_0 = 0)."""
    return _otter_numbers(N)


def otter_series(N: int) -> RationalSeries:
    return RationalSeries(tuple(Fraction(x) for x in otter_numbers(N)))


def _pack(coeffs, nbytes: int, stride: int = 1) -> mpz:
    gap = bytes(nbytes * (stride - 1))
    raw = gap.join(c.to_bytes(nbytes, "little") for c in coeffs)
    return mpz(int.from_bytes(raw, "little"))


def _unpack(x: mpz, nbytes: int, length: int) -> tuple[int, ...]:
    raw = int(x).to_bytes(nbytes * length, "little")
    return tuple(
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(length)
    )


_polys: list[tuple[int, ...]] = [(), (1,)]
_polys_lock = threading.Lock()


def _extend_polys(N: int) -> None:
    if N < len(_polys):
        return
    u = otter_numbers(N)
    # slot must hold every final coefficient (<= u_n) of every product sum
    nbytes = (u[N].bit_length() + 2 + 7) // 8
    shift = 8 * nbytes
    packed = [mpz(0)] + [_pack(p, nbytes) for p in _polys[1:]]
    for n in range(len(_polys), N + 1):
        acc = mpz(0)
        for k in range(1, (n + 1) // 2):
            acc += packed[k] * packed[n - k]
        if n % 2 == 0:
            m = n // 2
            doubled = _pack(_polys[m], nbytes, stride=2)
            # (f_m^2 + (2u - 1) f_m(u^2)) / 2 has integer coefficients
            acc += (packed[m] * packed[m] + (doubled << (shift + 1)) - doubled) >> 1
        poly = _unpack(acc, nbytes, n)
        _polys.append(poly)
        packed.append(_pack(poly, nbytes))


def bivariate_F(N: int = DEFAULT_ORDER) -> BivariateSeries:
    """f_1..f_N with f_n(u) = sum over shapes t of size n of u**sym(t)."""
    if N < 1:
        raise ValueError("order must be >= 1")
    with _polys_lock:
        _extend_polys(N)
        return BivariateSeries(tuple(_polys[: N + 1]))


def specialize(F: BivariateSeries, u0) -> RationalSeries:
    u0 = Fraction(u0)
    return RationalSeries((Fraction(0),) + tuple(F.evaluate(n, u0) for n in range(1, F.order + 1)))


def specialized_series(N: int, u0) -> RationalSeries:
    """F(z, u0) straight from the univariate recursion.

    Needs F(z, u0**2) to order N/2, which recursion supplies; independent of
    the bivariate polynomials, so it doubles as a cross-check of them.
    """
    u0 = Fraction(u0)
    c = [Fraction(0)] * (N + 1)
    if N < 1:
        return RationalSeries(tuple(c))
    c[1] = Fraction(1)
    inner = specialized_series(N // 2, u0 * u0).coeffs if N >= 2 else ()
    for n in range(2, N + 1):
        s = sum(c[k] * c[n - k] for k in range(1, (n + 1) // 2))
        if n % 2 == 0:
            s += c[n // 2] ** 2 / 2 + (u0 - Fraction(1, 2)) * inner[n // 2]
        c[n] = s
    return RationalSeries(tuple(c))


def labeled_scale(n: int) -> Fraction:
    """n! / (2n-3)!!, the inverse of W_n."""
    return Fraction(math.factorial(n), double_factorial(2 * n - 3))


def pn_exact(n: int, F: BivariateSeries) -> Fraction:
    """Probability that two uniform trees of B_n have the same shape."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Fraction(1)
    if F.order < n:
        raise CapacityError(f"p_{n} needs a series of order >= {n}, got {F.order}")
    return labeled_scale(n) ** 2 * F.evaluate(n, Fraction(1, 4))


def pn_sequence(N: int, F: BivariateSeries | None = None) -> list[Fraction]:
    """[p_0, p_1, ..., p_N] with p_0 unused (None)."""
    F = F if F is not None else bivariate_F(N)
    return [None] + [pn_exact(n, F) for n in range(1, N + 1)]
