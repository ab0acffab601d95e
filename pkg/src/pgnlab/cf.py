"""Continued fractions and the two-component systems they induce.

A badly approximable number theta carries a classical graph: at parameters
log q_k of the convergent denominators, the two functions (log|q_k theta -
p_k| shifted, log q_k) trade places.  Here only the combinatorial shadow
is kept: points s_k = 2 r_k and t_k = r_k + r_{k+1} with r_k = log q_k,
rounded to a fixed dyadic grid so that the result is an exact system.  The
second component climbs on [s_k, t_k], the first on [t_k, s_{k+1}].
"""

from __future__ import annotations

import math
from fractions import Fraction

from .systems import NO_EXTENSION, PLSystem, RisingBlock

__all__ = [
    "parse_cf",
    "expand_quotients",
    "convergents",
    "cf_fraction",
    "cf_float",
    "convergent_denominators",
    "two_system_from_cf",
]

# log q_k is rounded onto this grid to stay in exact arithmetic.
_LOG_GRID = 2**40


def parse_cf(text: str) -> tuple[tuple[int, ...], bool]:
    """Parse "[a0;a1,a2,...]"; a trailing "..." repeats the last quotient.

    Returns the explicit partial quotients and whether they repeat.
    """
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"continued fraction must look like [a0;a1,...]: {text!r}")
    body = s[1:-1].strip()
    if ";" in body:
        head, _, tail = body.partition(";")
        items = [head.strip()] + [t.strip() for t in tail.split(",")]
    else:
        items = [body.strip()]
    repeats = False
    if items and items[-1] == "...":
        items.pop()
        repeats = True
        if len(items) < 2:
            raise ValueError("repetition needs at least one partial quotient")
    if not items or any(not item for item in items):
        raise ValueError(f"empty partial quotient in {text!r}")
    try:
        quotients = tuple(int(item) for item in items)
    except ValueError as exc:
        raise ValueError(f"non-integer partial quotient in {text!r}") from exc
    if quotients[0] < 0:
        raise ValueError("leading quotient must be nonnegative")
    if any(a < 1 for a in quotients[1:]):
        raise ValueError("partial quotients after the first must be positive")
    return quotients, repeats


def expand_quotients(
    quotients: tuple[int, ...], repeats: bool, depth: int
) -> tuple[int, ...]:
    """Extend a repeating tail to the requested depth."""
    if depth < 1:
        raise ValueError("depth must be positive")
    if not repeats or len(quotients) >= depth:
        return quotients
    return quotients + (quotients[-1],) * (depth - len(quotients))


def convergents(quotients) -> tuple[tuple[int, int], ...]:
    """Numerator and denominator pairs of every convergent."""
    p_prev, p_prev2 = 1, 0
    q_prev, q_prev2 = 0, 1
    out = []
    for a in quotients:
        p = a * p_prev + p_prev2
        q = a * q_prev + q_prev2
        out.append((p, q))
        p_prev2, p_prev = p_prev, p
        q_prev2, q_prev = q_prev, q
    return tuple(out)


def cf_fraction(text: str, depth: int = 40) -> Fraction:
    """Exact value of the deepest convergent."""
    quotients, repeats = parse_cf(text)
    expanded = expand_quotients(quotients, repeats, depth)
    p, q = convergents(expanded)[-1]
    return Fraction(p, q)


def cf_float(text: str, depth: int = 40) -> float:
    return float(cf_fraction(text, depth))


def convergent_denominators(text: str, depth: int = 40) -> tuple[int, ...]:
    quotients, repeats = parse_cf(text)
    expanded = expand_quotients(quotients, repeats, depth)
    return tuple(q for _, q in convergents(expanded))


def two_system_from_cf(text: str, depth: int = 40) -> PLSystem:
    """The exact two-component system shadowing a continued fraction.

    Only denominators from 2 upward enter, and a period mark is placed at
    every s_k, so sampled estimation sees one convergent step per slice.
    """
    dens = [d for d in convergent_denominators(text, depth) if d >= 2]
    if len(dens) < 2:
        raise ValueError("need at least two convergent denominators of size 2+")
    levels = [Fraction(round(math.log(d) * _LOG_GRID), _LOG_GRID) for d in dens]
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("convergent denominators too close to separate levels")
    points = [2 * levels[0]]
    anchors = [(levels[0], levels[0])]
    blocks: list[RisingBlock] = []
    marks = [0]
    for r, r_next in zip(levels, levels[1:]):
        points.append(r + r_next)
        anchors.append((r, r_next))
        blocks.append(RisingBlock(2, 2))
        points.append(2 * r_next)
        anchors.append((r_next, r_next))
        blocks.append(RisingBlock(1, 1))
        marks.append(len(points) - 1)
    system = PLSystem(
        n=1,
        division_points=tuple(points),
        anchors=tuple(anchors),
        blocks=tuple(blocks),
        extension=NO_EXTENSION,
        period_marks=tuple(marks),
    )
    system.validate().raise_if_invalid()
    return system
