"""Verification of exponent inequalities and the local growth bound.

Every check is reported as an outcome carrying both sides of the
inequality and the exact slack, so equality cases are distinguishable
from strict ones.  Nothing here raises on a failed inequality; callers
decide what failure means.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exponents import ExponentProfile
from .rationals import INF, Infinity, ext_sub, format_extended, is_finite
from .systems import PLSystem

__all__ = [
    "CheckOutcome",
    "german_interval",
    "jarnik_1938_interval",
    "check_profile",
    "outcomes_to_json",
    "growth_bound_at",
    "verify_growth_bound",
]

ExtRational = Union[Fraction, Infinity]


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    holds: bool
    lhs: ExtRational
    rhs: ExtRational
    slack: ExtRational


def outcomes_to_json(outcomes) -> dict:
    return {
        "schema": 1,
        "all_hold": all(o.holds for o in outcomes),
        "outcomes": [
            {
                "name": o.name,
                "holds": o.holds,
                "lhs": format_extended(o.lhs),
                "rhs": format_extended(o.rhs),
                "slack": format_extended(o.slack),
            }
            for o in outcomes
        ],
    }


def german_interval(n: int, top: ExtRational) -> tuple[Fraction, Fraction]:
    """Admissible range of the bottom uniform exponent given the top one.

    Both endpoints are attained inside Family A, which is what makes this
    the binding transference statement for n >= 2.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"transference needs dimension n >= 2, got {n!r}")
    if not is_finite(top):
        return Fraction(1, n - 1), Fraction(1)
    top = Fraction(top)
    if top < n:
        raise ValueError(
            f"top uniform exponent {format_extended(top)} below the dimension"
        )
    return (top - 1) / ((n - 1) * top), (top - (n - 1)) / top


def jarnik_1938_interval(n: int, top: ExtRational) -> tuple[Fraction, ExtRational]:
    """The older transference range; wider than the binding one for n >= 3."""
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"transference needs dimension n >= 2, got {n!r}")
    if not is_finite(top):
        return Fraction(1, n - 1), INF
    top = Fraction(top)
    if top < n:
        raise ValueError(
            f"top uniform exponent {format_extended(top)} below the dimension"
        )
    return top / ((n - 1) * top + n), (top - n + 1) / n


def _outcome_le(name: str, lhs: ExtRational, rhs: ExtRational) -> CheckOutcome:
    return CheckOutcome(name, lhs <= rhs, lhs, rhs, ext_sub(rhs, lhs))


def check_profile(profile: ExponentProfile) -> tuple[CheckOutcome, ...]:
    """All inequality checks that a single profile must satisfy.

    Emits the monotone chains, the lower bounds from the sum condition,
    and, for n >= 2, both transference ranges for the bottom uniform
    exponent; for n = 2 the range collapses and is restated as an exact
    equality between the two uniform exponents.
    """
    n = profile.n
    out: list[CheckOutcome] = []
    for d in range(n - 1):
        out.append(
            _outcome_le(
                f"omega_hat_chain[{d}]", profile.omega_hat[d], profile.omega_hat[d + 1]
            )
        )
        out.append(
            _outcome_le(f"omega_chain[{d}]", profile.omega[d], profile.omega[d + 1])
        )
    for d in range(n):
        out.append(
            _outcome_le(
                f"omega_ge_omega_hat[{d}]", profile.omega_hat[d], profile.omega[d]
            )
        )
        out.append(
            _outcome_le(
                f"minkowski_lower[{d}]", Fraction(d + 1, n - d), profile.omega_hat[d]
            )
        )
    if n >= 2:
        top = profile.omega_hat[n - 1]
        bottom = profile.omega_hat[0]
        j_lo, j_hi = jarnik_1938_interval(n, top)
        out.append(_outcome_le("jarnik_1938_lower", j_lo, bottom))
        out.append(_outcome_le("jarnik_1938_upper", bottom, j_hi))
        g_lo, g_hi = german_interval(n, top)
        out.append(_outcome_le("german_lower", g_lo, bottom))
        out.append(_outcome_le("german_upper", bottom, g_hi))
        if n == 2:
            if not is_finite(top):
                inv = Fraction(0)
            elif top == 0:
                inv = INF
            else:
                inv = Fraction(1) / top
            if is_finite(bottom) and is_finite(inv):
                lhs: ExtRational = bottom + inv
            else:
                lhs = INF
            slack = abs(ext_sub(Fraction(1), lhs)) if is_finite(lhs) else INF
            out.append(
                CheckOutcome("jarnik_equality", lhs == 1, lhs, Fraction(1), slack)
            )
    return tuple(out)


def growth_bound_at(
    system: PLSystem, k: int, m: int, p0, p
) -> tuple[CheckOutcome, CheckOutcome]:
    """The two conclusions of the growth bound for one concrete tuple.

    Hypothesis: component k rises immediately right of p0 and k < m.  The
    first outcome bounds P_m(p) by max(P_m(p0), P_k(p0) + p - p0); the
    second asserts that P_m stays constant until the moving line catches
    up, at p0 + P_m(p0) - P_k(p0).
    """
    n = system.n
    if not 1 <= k < m <= n + 1:
        raise ValueError(f"need 1 <= k < m <= {n + 1}, got k={k}, m={m}")
    p0 = Fraction(p0)
    p = Fraction(p)
    if p <= p0:
        raise ValueError("the bound compares a later point, need p > p0")
    block = system.rising_block_right_of(p0)
    if not block.covers(k):
        raise ValueError(
            f"component {k} does not rise right of the base point"
        )
    v0 = system.evaluate(p0)
    vp = system.evaluate(p)
    bound = max(v0[m - 1], v0[k - 1] + (p - p0))
    first = CheckOutcome(
        f"growth_bound(k={k},m={m})",
        vp[m - 1] <= bound,
        vp[m - 1],
        bound,
        bound - vp[m - 1],
    )
    plateau_end = p0 + (v0[m - 1] - v0[k - 1])
    if not system.is_dilation:
        plateau_end = min(plateau_end, system.q_end)
    at_end = system.evaluate(plateau_end)[m - 1]
    second = CheckOutcome(
        f"growth_constancy(k={k},m={m})",
        at_end == v0[m - 1],
        at_end,
        v0[m - 1],
        abs(v0[m - 1] - at_end),
    )
    return first, second


def verify_growth_bound(
    system: PLSystem,
    samples: int = 200,
    seed: int = 0,
    horizon_periods: int = 2,
) -> tuple[CheckOutcome, ...]:
    """Seeded random verification of the growth bound on one system.

    Base points are drawn from the fundamental domain extended by the
    given number of periods for dilation systems, or from the whole finite
    domain otherwise.  Component pairs are drawn so the hypothesis holds.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    n = system.n
    q_lo = system.q_start
    if system.is_dilation:
        q_hi = system.q_start * system.extension.factor**horizon_periods
    else:
        q_hi = system.q_end

    def rand_point(lo: Fraction, hi: Fraction, open_ends: bool) -> Fraction:
        lo_t, hi_t = (1, 10**6 - 1) if open_ends else (0, 10**6)
        return lo + (hi - lo) * Fraction(rng.randint(lo_t, hi_t), 10**6)

    out: list[CheckOutcome] = []
    for i in range(samples):
        for _ in range(1000):
            p0 = rand_point(q_lo, q_hi, open_ends=True)
            block = system.rising_block_right_of(p0)
            if block.lo <= n:
                break
        else:
            raise AssertionError("could not sample a base point below the top")
        k = rng.randint(block.lo, min(block.hi, n))
        m = rng.randint(k + 1, n + 1)
        p = rand_point(p0, q_hi, open_ends=True)
        first, second = growth_bound_at(system, k, m, p0, p)
        out.append(
            CheckOutcome(f"growth_bound[{i}]", first.holds, first.lhs, first.rhs,
                         first.slack)
        )
        out.append(
            CheckOutcome(
                f"growth_constancy[{i}]", second.holds, second.lhs, second.rhs,
                second.slack
            )
        )
    return tuple(out)
