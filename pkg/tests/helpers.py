"""Shared builders and hand-derived expectations for the test suite.

Every frozen table below was produced on paper by walking the block
schedule segment by segment and recording values at each division point.
The traces are spelled out in comments next to the numbers so they can be
rechecked without running any package code.
"""

import dataclasses
import random
from fractions import Fraction

from pgnlab import (
    FamilyAParams,
    FamilyBParams,
    PLSystem,
    build_family_a,
    build_family_a_infinite,
    build_family_b,
    build_uniform,
    default_params_b,
)

F = Fraction


def frs(*texts) -> tuple[Fraction, ...]:
    return tuple(Fraction(t) for t in texts)


def make_a356() -> PLSystem:
    return build_family_a(FamilyAParams(3, F(5), F(1, 2), F(6)))


def make_a2() -> PLSystem:
    return build_family_a(FamilyAParams(2, F(4), F(1), F(5)))


def make_a4() -> PLSystem:
    return build_family_a(FamilyAParams(4, F(13, 2), F(2, 3), F(3)))


def make_b(n: int) -> PLSystem:
    return build_family_b(default_params_b(n))


def make_uniform() -> PLSystem:
    return build_uniform(3)


def make_infinite(periods: int = 4) -> PLSystem:
    return build_family_a_infinite(3, F(1, 2), periods=periods)


def fuzz_targets() -> tuple[tuple[str, PLSystem], ...]:
    """The constructions exercised by the fuzzing and growth bound sweeps."""
    return (
        ("A n=3", make_a356()),
        ("A n=2", make_a2()),
        ("A n=4", make_a4()),
        ("B n=3", make_b(3)),
        ("B n=4", make_b(4)),
        ("uniform n=3", make_uniform()),
        ("A infinite", make_infinite()),
    )


# Trace for n=3, top exponent 5, slope share 1/2, start 6.  The dilation
# factor is 1 + (1/2)(5-3) = 2 and the start anchor is (1,1,2,2):
#   [6,7]   block (2,2): (1,1,2,2) -> (1,2,2,2)
#   [7,7]   block (3,3): degenerate, the two middle levels coincide here
#   [7,9]   block (4,4): (1,2,2,2) -> (1,2,2,4)
#   [9,9]   block (2,2): degenerate
#   [9,11]  block (3,3): (1,2,2,4) -> (1,2,4,4)
#   [11,12] block (1,1): (1,2,4,4) -> (2,2,4,4) = 2 * (1,1,2,2)
A356_POINTS = frs("6", "7", "7", "9", "9", "11", "12")
A356_BLOCKS = ((2, 2), (3, 3), (4, 4), (2, 2), (3, 3), (1, 1))
A356_ANCHORS = (
    frs("1", "1", "2", "2"),
    frs("1", "2", "2", "2"),
    frs("1", "2", "2", "2"),
    frs("1", "2", "2", "4"),
    frs("1", "2", "2", "4"),
    frs("1", "2", "4", "4"),
    frs("2", "2", "4", "4"),
)
A356_GROUP_KINDS = ("ordinary", "ordinary", "switch", "switch", "ordinary")

# Ratio scans over the distinct points 6, 7, 9, 11 (seam dropped):
#   S_1/q: 1/6, 1/7, 1/9, 1/11          max 1/6,  min 1/11
#   S_2/q: 1/3, 3/7, 1/3, 3/11          max 3/7,  min 3/11
#   S_3/q: 2/3, 5/7, 5/9, 7/11          max 5/7,  min 5/9
# and the dictionary 1/extremum - 1 gives the exponents below.
A356_OMEGA_HAT = frs("2/5", "4/3", "5")
A356_OMEGA = frs("4/5", "8/3", "10")
A356_PHI_BAR = frs("1/6", "2/7", "4/11", "4/9")
A356_PHI_UNDER = frs("1/11", "1/6", "2/9", "2/7")

# Trace for n=2, top exponent 4, start 5: factor 3, anchor (1,1,3):
#   [5,7]   block (2,2): (1,1,3) -> (1,3,3)
#   [7,13]  block (3,3): (1,3,3) -> (1,3,9)
#   [13,15] block (1,1): (1,3,9) -> (3,3,9) = 3 * (1,1,3)
# Scans over 5, 7, 13: S_1/q max 1/5 min 1/13; S_2/q max 4/7 min 4/13.
A2_POINTS = frs("5", "7", "13", "15")
A2_ANCHORS = (
    frs("1", "1", "3"),
    frs("1", "3", "3"),
    frs("1", "3", "9"),
    frs("3", "3", "9"),
)
A2_OMEGA_HAT = frs("3/4", "4")
A2_OMEGA = frs("9/4", "12")
A2_PHI_BAR = frs("1/5", "3/7", "9/13")
A2_PHI_UNDER = frs("1/13", "1/5", "3/7")

# Trace for the default climb at n=3: C=3, values (1/8,1/8,1/4,1/2).
#   [1,9/8]    block (2,2): level 2 climbs 1/8 -> 1/4
#   [9/8,11/8] block (2,3): both climb 1/4 -> 3/8
#   [11/8,3/2] block (3,3): level 3 climbs 3/8 -> 1/2
#   [3/2,2]    block (3,4): both climb 1/2 -> 3/4
#   [2,11/4]   block (4,4): level 4 climbs 3/4 -> 3/2
#   [11/4,3]   block (1,1): level 1 climbs 1/8 -> 3/8
B3_POINTS = frs("1", "9/8", "11/8", "3/2", "2", "11/4", "3")
B3_BLOCKS = ((2, 2), (2, 3), (3, 3), (3, 4), (4, 4), (1, 1))
B3_ANCHORS = (
    frs("1/8", "1/8", "1/4", "1/2"),
    frs("1/8", "1/4", "1/4", "1/2"),
    frs("1/8", "3/8", "3/8", "1/2"),
    frs("1/8", "3/8", "1/2", "1/2"),
    frs("1/8", "3/8", "3/4", "3/4"),
    frs("1/8", "3/8", "3/4", "3/2"),
    frs("3/8", "3/8", "3/4", "3/2"),
)

# Scans over 1, 9/8, 11/8, 3/2, 2, 11/4:
#   S_1/q: 1/8, 1/9, 1/11, 1/12, 1/16, 1/22     max 1/8,  min 1/22
#   S_2/q: 1/4, 1/3, 4/11, 1/3, 1/4, 2/11       max 4/11, min 2/11
#   S_3/q: 1/2, 5/9, 7/11, 2/3, 5/8, 5/11       max 2/3,  min 5/11
B3_OMEGA_HAT = frs("1/2", "7/4", "7")
B3_OMEGA = frs("6/5", "9/2", "21")
B3_PHI_BAR = frs("1/8", "3/11", "3/8", "6/11")
B3_PHI_UNDER = frs("1/22", "1/8", "2/9", "1/3")

# The uniform system at n=3 has a single division point per period where
# all partial sum ratios are k/4, so both exponent rows collapse.
UNIFORM3_OMEGA_HAT = frs("1/3", "1", "3")


def perturb_one_anchor(system: PLSystem, rng) -> PLSystem:
    """Copy the system with one anchor component nudged by a nonzero rational.

    Any such nudge breaks the sum condition at that division point, so the
    result must fail validation no matter which component moved.
    """
    anchors = [list(a) for a in system.anchors]
    i = rng.randrange(len(anchors))
    j = rng.randrange(len(anchors[i]))
    delta = F(rng.randint(1, 999), 1000) * rng.choice((1, -1))
    anchors[i][j] += delta
    return dataclasses.replace(
        system, anchors=tuple(tuple(a) for a in anchors)
    )


def perturbed_b_params(n: int, rng: random.Random) -> FamilyBParams:
    """A small admissible perturbation of the default weights and factor.

    Nudges of a few percent keep every strict inequality comfortably
    satisfied, so resampling is rare; the loop guards the corner cases.
    """
    base = default_params_b(n)
    for _ in range(100):
        def nudge(value):
            return value * (1 + F(rng.randint(-50, 50), 1000))

        c = nudge(base.C)
        a2 = nudge(base.A[1])
        mids = [nudge(v) for v in base.A[2:n]]
        last = 1 - 2 * a2 - sum(mids, F(0))
        params = FamilyBParams(n, c, (a2, a2, *mids, last))
        if not params.validate():
            return params
    raise AssertionError("no admissible perturbation found")
