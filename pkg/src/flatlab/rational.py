"""Number handling shared by both coordinate backends.

Exact surfaces carry Fraction coordinates, float surfaces carry floats.
JSON files store exact values as "p/q" strings so round trips are lossless.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Number = Union[int, float, Fraction]

BACKENDS = ("exact", "float")


def to_fraction(x) -> Fraction:
    """Coerce x to a Fraction. Floats convert exactly (they are dyadic)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def parse_number(value, backend: str) -> Number:
    """Read a JSON scalar ("p/q" string, int, or float) in the given backend."""
    if backend == "exact":
        return to_fraction(value)
    if isinstance(value, str):
        return float(Fraction(value))
    return float(value)


def format_number(x: Number) -> Union[str, int, float]:
    """JSON form of a coordinate: Fractions become "p/q" strings."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return float(x)


def common_denominator(values) -> int:
    """Least common multiple of the denominators of an iterable of Fractions."""
    lcm = 1
    for v in values:
        f = to_fraction(v)
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    return lcm


def sqrt_number(x: Number) -> float:
    return math.sqrt(float(x))


def exact_div(a: Number, b: Number) -> Number:
    """a / b without silently leaving the exact domain (int/int -> Fraction)."""
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b
