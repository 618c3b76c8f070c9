"""Exact rational helpers shared across the package."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


class RationalParseError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``p``, ``-p`` or ``p/q`` (q > 0) exactly."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise RationalParseError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise RationalParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def Q(value) -> Fraction:
    """Coerce ints, Fractions, mpq values and rational strings to Fraction.

    Floats are refused so nothing inexact leaks into a decision.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError(f"float {value!r} rejected; pass a Fraction or a 'p/q' string")
    if isinstance(value, Rational) or hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def as_vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(Q(v) for v in values)


def as_matrix(rows: Iterable[Iterable]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(as_vector(r) for r in rows)


def fmt(q: Fraction) -> str:
    q = Q(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fmt_vector(v: Sequence) -> list[str]:
    return [fmt(x) for x in v]


def fmt_matrix(m: Sequence[Sequence]) -> list[list[str]]:
    return [fmt_vector(r) for r in m]


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def matvec(A: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(dot(row, x) for row in A)
