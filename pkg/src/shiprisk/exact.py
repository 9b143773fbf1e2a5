"""Exact rational numbers, their display forms, and small shared primitives.

Every quantity the engines produce (unit sizes, value-function points,
weights, aggregated totals) is a ``fractions.Fraction``.  Rounding happens
only here, at the display boundary: two decimal places, half away from zero.
On the wire, exact numbers travel as integer-ratio strings ("400/17"), never
as decimals.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

Numberish = Union[Fraction, int, str, float]


def as_fraction(value: Numberish) -> Fraction:
    """Coerce a number-like input to an exact Fraction.

    Strings may be integer ratios ("400/17") or decimal literals ("3.25");
    decimal strings are read exactly (3.25 -> 13/4, not the float).  Floats
    are accepted for convenience and converted via their shortest decimal
    repr so that 0.1 means 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty number")
        return Fraction(text)
    raise TypeError(f"cannot interpret {type(value).__name__} as a number")


def format_ratio(value: Fraction) -> str:
    """Serialize exactly, as "p" or "p/q"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def round_half_up(value: Fraction, places: int = 2) -> Fraction:
    """Round to ``places`` decimals, ties away from zero."""
    q = 10**places
    if value >= 0:
        return Fraction(math.floor(value * q + Fraction(1, 2)), q)
    return -Fraction(math.floor(-value * q + Fraction(1, 2)), q)


_NATURAL_CHUNKS = re.compile(r"(\d+)")


def natural_key(text: str):
    """Sort key treating digit runs numerically, so a2 < a10 and g2 < g10."""
    return tuple(
        int(chunk) if chunk.isdigit() else chunk
        for chunk in _NATURAL_CHUNKS.split(text)
    )


def display(value: Fraction, places: int = 2) -> str:
    """Fixed-point display string at ``places`` decimals (half away from zero)."""
    q = 10**places
    scaled = round_half_up(value, places) * q
    n = scaled.numerator  # denominator is 1 by construction
    sign = "-" if n < 0 else ""
    n = abs(n)
    if places == 0:
        return f"{sign}{n}"
    return f"{sign}{n // q}.{n % q:0{places}d}"
