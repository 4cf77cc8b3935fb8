"""Exact rational parsing and fixed-point display helpers.

Every quantity inside the engine is a :class:`fractions.Fraction`; rounding
exists only at the display boundary, where tables print two decimal places
using round-half-away-from-zero.
"""
from __future__ import annotations

from fractions import Fraction

Rational = Fraction


def as_rational(value: Fraction | int | str) -> Fraction:
    """Convert *value* to an exact :class:`Fraction`.

    Accepts integers, fractions, and strings in either decimal ("0.01",
    "-3.5") or ratio ("1/100") form.  Floats are rejected: binary floats do
    not carry the exact decimal the caller had in mind, so decimals must be
    passed as strings.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError(
            "floats are ambiguous; pass decimals as strings (e.g. '0.01')"
        )
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed number: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def round_half_away(value: Fraction, places: int = 2) -> Fraction:
    """Round to *places* decimals, halves going away from zero."""
    scale = Fraction(10) ** places
    scaled = value * scale
    if scaled >= 0:
        units = (scaled + Fraction(1, 2)).__floor__()
    else:
        units = -((-scaled + Fraction(1, 2)).__floor__())
    return Fraction(units) / scale


def format_decimal(value: Fraction, places: int = 2) -> str:
    """Fixed-point display form of *value* (the only rounding in the system)."""
    rounded = round_half_away(value, places)
    scale = 10**places
    units = rounded.numerator * (scale // rounded.denominator)
    sign = "-" if units < 0 else ""
    units = abs(units)
    if places == 0:
        return f"{sign}{units}"
    return f"{sign}{units // scale}.{units % scale:0{places}d}"


def rational_text(value: Fraction) -> str:
    """Lossless serialization: a decimal string when one terminates, else p/q."""
    denominator = value.denominator
    twos = 0
    while denominator % 2 == 0:
        denominator //= 2
        twos += 1
    fives = 0
    while denominator % 5 == 0:
        denominator //= 5
        fives += 1
    if denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    places = max(twos, fives)
    if places == 0:
        return str(value.numerator)
    return format_decimal(value, places)
