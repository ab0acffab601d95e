"""Exact scalar helpers: fraction parsing/formatting and symbolic infinities.

Every quantity in this package outside the lattice oracle is a
``fractions.Fraction``.  Exponents can legitimately take the value plus
infinity, so comparisons and a little arithmetic are provided through two
singletons ``INF`` and ``NEG_INF``.  Decimal literals are rejected on input:
an exact decimal would silently stand in for a fraction it does not equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

__all__ = [
    "INF",
    "NEG_INF",
    "ExtRational",
    "ext_sub",
    "is_finite",
    "parse_fraction",
    "parse_extended",
    "format_fraction",
    "format_extended",
]

_FINITE = (int, Fraction)


class _Signed:
    """Shared comparison plumbing for the two infinity singletons."""

    _sign = 0
    __slots__ = ()

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash(("pgnlab-infinity", self._sign))

    def __lt__(self, other):
        if isinstance(other, _FINITE):
            return self._sign < 0
        if isinstance(other, _Signed):
            return self._sign < other._sign
        return NotImplemented

    def __le__(self, other):
        return self == other or self.__lt__(other)

    def __gt__(self, other):
        if isinstance(other, _FINITE):
            return self._sign > 0
        if isinstance(other, _Signed):
            return self._sign > other._sign
        return NotImplemented

    def __ge__(self, other):
        return self == other or self.__gt__(other)


class Infinity(_Signed):
    """Positive infinity; compares above every Fraction."""

    _sign = 1
    _instance = None
    __slots__ = ()

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __neg__(self):
        return NEG_INF


class NegInfinity(_Signed):
    """Negative infinity; only appears in slack bookkeeping."""

    _sign = -1
    _instance = None
    __slots__ = ()

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    def __neg__(self):
        return INF


INF = Infinity()
NEG_INF = NegInfinity()

ExtRational = Union[Fraction, Infinity]


def is_finite(x) -> bool:
    return isinstance(x, _FINITE)


def ext_sub(a, b):
    """a - b with infinities.  inf - inf is treated as zero slack."""
    if is_finite(a) and is_finite(b):
        return Fraction(a) - Fraction(b)
    if a == b:
        return Fraction(0)
    if a is INF or b is NEG_INF:
        return INF
    return NEG_INF


def parse_fraction(text: str) -> Fraction:
    """Parse "p/q" or "p".  Decimal and scientific forms are rejected."""
    s = text.strip()
    if any(c in s for c in ".eE"):
        raise ValueError(f"exact fraction required, got {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse fraction {text!r}") from exc


def parse_extended(text: str) -> ExtRational:
    s = text.strip().lower()
    if s in ("inf", "+inf", "infinity"):
        return INF
    return parse_fraction(text)


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_extended(x) -> str:
    if x is INF:
        return "inf"
    if x is NEG_INF:
        return "-inf"
    return format_fraction(x)
