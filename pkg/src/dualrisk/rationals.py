"""Coercion, parsing, and rendering of exact rational numbers.

The package computes with stdlib fractions.Fraction throughout. These
helpers keep the boundary honest: text inputs like "5/12" or "0.25" map to
the exact rational they denote, while non-integral binary floats are
rejected rather than silently converted to surprising fractions.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FormatError

Num = Fraction | float  # exact where possible, float for transcendental families


def rat(value: int | str | Fraction) -> Fraction:
    """Coerce value to an exact Fraction.

    Accepts ints, Fractions, and strings in "p/q" or decimal form. Floats
    are rejected unless integral: Fraction(0.1) is not 1/10, and silently
    accepting it would poison every downstream exact comparison.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise FormatError(f"cannot interpret {value!r} as a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value.is_integer():
            return Fraction(int(value))
        raise FormatError(
            f"refusing to coerce non-integral float {value!r}; pass a Fraction or a string"
        )
    if isinstance(value, str):
        return parse_rational(value)
    raise FormatError(f"cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", integer, or decimal text into an exact Fraction."""
    s = text.strip()
    if not s:
        raise FormatError("empty rational literal")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational literal {text!r}: {exc}") from None


def format_rational(value: Num, sig: int = 12) -> str:
    """Render a number as "p/q (= decimal)" with sig significant digits.

    Floats render as plain decimals; integers drop the parenthetical.
    """
    if isinstance(value, float):
        return f"{value:.{sig}g}"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value} (= {float(value):.{sig}g})"


def format_exact(value: Num, sig: int = 12) -> str:
    """Render "p/q" for rationals and a sig-digit decimal for floats."""
    if isinstance(value, float):
        return f"{value:.{sig}g}"
    return str(Fraction(value))
