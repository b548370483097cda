"""Strict parsing and formatting of exact rationals.

Only integer and "p/q" literals are accepted; decimal strings are rejected
so that inputs are bit-exact reproducible.
"""

import re
from fractions import Fraction

from .errors import SchemaError

_RATSTR = re.compile(r"-?[0-9]+(/[0-9]+)?\Z")


def parse_ratstr(text) -> Fraction:
    if not isinstance(text, str) or not _RATSTR.match(text):
        raise SchemaError(f"not a valid rational literal: {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise SchemaError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_ratstr(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
