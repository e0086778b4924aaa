"""Exact rational probabilities and rational (de)serialization helpers.

Rationals serialize as ``{"num": "...", "den": "..."}`` with decimal-string
fields, so values never hit 64-bit limits in transit.  CSV output instead
uses fixed 12-significant-digit decimals (see :func:`decimal12`).
"""

from __future__ import annotations

import decimal
from fractions import Fraction
from typing import Any


class RationalProb(Fraction):
    """A probability as an exact reduced fraction in [0, 1].

    The closed endpoints are admitted deliberately: p = 0 and p = 1 make
    degenerate-but-exact test fixtures even though random-graph statements
    are only interesting for 0 < p < 1.
    """

    def __new__(cls, numerator: Any = 0, denominator: Any = None) -> "RationalProb":
        self = super().__new__(cls, numerator, denominator)
        if self < 0 or self > 1:
            raise ValueError(f"probability {self} outside [0, 1]")
        return self


def rational_to_json(x: Fraction) -> dict[str, str]:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def rational_from_json(obj: Any) -> Fraction:
    if isinstance(obj, dict) and "num" in obj and "den" in obj:
        return Fraction(int(obj["num"]), int(obj["den"]))
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return Fraction(obj)
    raise ValueError(f"not a serialized rational: {obj!r}")


def parse_prob(obj: Any) -> RationalProb:
    """Parse a probability from JSON ('1/2', {'num':..,'den':..}, 0, 1, ...)."""
    if isinstance(obj, float):
        return RationalProb(Fraction(obj).limit_denominator(10**12))
    return RationalProb(rational_from_json(obj))


def decimal12(x: Fraction | int | float) -> str:
    """Fixed-point decimal with 12 significant digits (CSV convention).

    >>> decimal12(Fraction(7, 8))
    '0.875000000000'
    """
    if isinstance(x, float):
        x = Fraction(x)
    x = Fraction(x)
    if x == 0:
        return "0.000000000000"
    with decimal.localcontext() as ctx:
        ctx.prec = 40
        d = decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)
        q = d.quantize(decimal.Decimal(1).scaleb(d.adjusted() - 11), rounding=decimal.ROUND_HALF_EVEN)
    return format(q, "f")
