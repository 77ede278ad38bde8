"""Rational number serialization utilities.

This module provides the ``"p/q"`` string codec used for every rational
value that crosses a file boundary, plus a pydantic-annotated type so
models can declare exact rational fields.
"""
from fractions import Fraction
from typing import Annotated, Any, Sequence, Tuple

from pydantic import PlainSerializer, PlainValidator


def parse_rational(value: Any) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction.

    Floats and booleans are rejected since they cannot be read exactly.

    :param value: Raw value
    :type value: Any
    :returns: Reduced fraction
    :rtype: Fraction
    :raises ValueError: If the value is not an exact rational
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"{value!r} is not an exact rational; write it as a 'p/q' string")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse {value!r} as a rational 'p/q'")
    raise ValueError(f"unsupported rational value {value!r}")


def format_rational(value: Fraction) -> str:
    """Format a Fraction as ``"p/q"``, or ``"p"`` when it is an integer.

    :param value: Fraction to format
    :type value: Fraction
    :returns: Exact string form
    :rtype: str
    """
    return str(Fraction(value))


def format_pair(values: Sequence[Fraction]) -> Tuple[str, ...]:
    return tuple(format_rational(v) for v in values)


#: A Fraction read from and written as a ``"p/q"`` string.
RationalStr = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]
