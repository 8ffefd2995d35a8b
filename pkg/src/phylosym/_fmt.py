from __future__ import annotations

import decimal
from fractions import Fraction


def frac_str(x) -> str:
    """Exact "p/q" rendering; integers render without a denominator."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def dec_str(x, digits: int = 15) -> str:
    """Decimal rendering of an exact rational to ``digits`` significant digits."""
    x = Fraction(x)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        value = decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)
    return format(value, "g") if value.adjusted() < -6 else str(value)
