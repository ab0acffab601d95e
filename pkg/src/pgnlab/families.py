"""Constructors for the worked families of generalized (n+1)-systems.

Family A realizes a prescribed uniform exponent in the top position by
repeating a six-segment pattern that dilates exactly from period to period.
Its unbounded variant glues one copy of the pattern per growth step, with
the effective exponent rising by one each period.  Family B realizes a
strictly ordered tuple of uniform exponents from a weight vector A and a
dilation factor C.

Every constructor returns a validated ``PLSystem``; parameter problems are
collected exhaustively and raised as a single ``ParamError``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .rationals import INF, Infinity, format_extended, format_fraction, is_finite
from .systems import NO_EXTENSION, Extension, PLSystem, RisingBlock

__all__ = [
    "ParamError",
    "FamilyAParams",
    "FamilyBParams",
    "build_uniform",
    "build_family_a",
    "build_family_a_infinite",
    "build_family_b",
    "default_params_b",
    "CrossCheckEntry",
    "CrossCheckReport",
    "crosscheck_printed_formulas",
    "ShiftedPairReport",
    "shifted_pair_divergence",
    "infinite_p1_ratio_max",
    "infinite_top_ratio_min",
    "infinite_top_ratio_limit",
]


class ParamError(ValueError):
    """Inadmissible construction parameters, listing every failed condition."""

    def __init__(self, problems):
        self.problems = tuple(problems)
        super().__init__("; ".join(self.problems))


def _as_fraction(value, label: str, problems: list[str]) -> Optional[Fraction]:
    try:
        return Fraction(value)
    except (TypeError, ValueError):
        problems.append(f"{label} is not a rational number")
        return None


@dataclass(frozen=True)
class FamilyAParams:
    """Parameters (n, target top exponent, slope share a, start point q0)."""

    n: int
    omega_hat: Union[Fraction, Infinity]
    a: Fraction
    q0: Fraction = Fraction(1)

    def __post_init__(self):
        if is_finite(self.omega_hat):
            object.__setattr__(self, "omega_hat", Fraction(self.omega_hat))
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "q0", Fraction(self.q0))

    def validate(self) -> tuple[str, ...]:
        problems: list[str] = []
        if not isinstance(self.n, int) or self.n < 2:
            problems.append(f"dimension n must be an integer >= 2, got {self.n!r}")
            return tuple(problems)
        if self.omega_hat is INF:
            problems.append(
                "target exponent must be finite here; use build_family_a_infinite"
            )
        elif self.omega_hat < self.n:
            problems.append(
                f"target exponent {format_extended(self.omega_hat)} below the "
                f"dimension n={self.n}"
            )
        lo = Fraction(1, self.n - 1)
        if not lo <= self.a <= 1:
            problems.append(
                f"slope share a={format_fraction(self.a)} outside "
                f"[{format_fraction(lo)}, 1]"
            )
        if self.n == 2 and self.a != 1:
            problems.append("dimension 2 admits only a=1")
        if self.q0 <= 0:
            problems.append("start point q0 must be positive")
        return tuple(problems)


@dataclass(frozen=True)
class FamilyBParams:
    """Parameters (n, dilation factor C, weight vector A of length n+1)."""

    n: int
    C: Fraction
    A: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "C", Fraction(self.C))
        object.__setattr__(self, "A", tuple(Fraction(v) for v in self.A))

    def validate(self) -> tuple[str, ...]:
        problems: list[str] = []
        if not isinstance(self.n, int) or self.n < 3:
            problems.append(f"dimension n must be an integer >= 3, got {self.n!r}")
            return tuple(problems)
        A = self.A
        if len(A) != self.n + 1:
            problems.append(f"weight vector has {len(A)} entries, expected {self.n + 1}")
            return tuple(problems)
        if self.C <= 1:
            problems.append("factor C must exceed 1")
        if A[0] <= 0:
            problems.append("A_1 must be positive")
        if A[0] != A[1]:
            problems.append("A_1 must equal A_2")
        if A[2] <= A[1]:
            problems.append("A_3 must exceed A_2")
        total = sum(A, Fraction(0))
        if total != 1:
            problems.append(f"weights sum to {format_fraction(total)}, expected 1")
        # 1-based weights: A_k = A[k-1].
        for k in range(2, self.n + 1):
            if not self.C * A[k - 1] > A[k]:
                problems.append(f"need A_{k + 1}/A_{k} < C, violated at k={k}")
        for k in range(2, self.n):
            if not A[k + 1] > self.C * A[k - 1]:
                problems.append(f"need C < A_{k + 2}/A_{k}, violated at k={k}")
        if not A[self.n] > A[self.n - 1]:
            problems.append("need A_{n+1} > A_n")
        return tuple(problems)


def _checked(params) -> None:
    problems = params.validate()
    if problems:
        raise ParamError(problems)


def build_uniform(n: int, q0=Fraction(1), factor=Fraction(2)) -> PLSystem:
    """The system whose n+1 components stay equal forever.

    All ratio extrema are constant, so every exponent collapses to the
    value forced by the ordering and sum conditions alone.  The dilation
    factor only fixes a drawing period and defaults to 2.
    """
    problems = []
    if not isinstance(n, int) or n < 1:
        problems.append(f"dimension n must be an integer >= 1, got {n!r}")
    q0 = _as_fraction(q0, "q0", problems)
    factor = _as_fraction(factor, "factor", problems)
    if q0 is not None and q0 <= 0:
        problems.append("start point q0 must be positive")
    if factor is not None and factor <= 1:
        problems.append("factor must exceed 1")
    if problems:
        raise ParamError(problems)
    level = q0 / (n + 1)
    system = PLSystem(
        n=n,
        division_points=(q0, factor * q0),
        anchors=(
            tuple(level for _ in range(n + 1)),
            tuple(factor * level for _ in range(n + 1)),
        ),
        blocks=(RisingBlock(1, n + 1),),
        extension=Extension.dilation(factor),
    )
    system.validate().raise_if_invalid()
    return system


def build_family_a(params: FamilyAParams) -> PLSystem:
    """One period of Family A with exact dilation extension.

    The target exponent equal to n collapses the pattern to the uniform
    system, which is returned in that case.  Dimension 2 drops the middle
    line of the pattern and keeps four division points per period.
    """
    _checked(params)
    n, w, a, q0 = params.n, params.omega_hat, params.a, params.q0
    if w == n:
        return build_uniform(n, q0)
    spread = w - n
    factor = 1 + a * spread
    low = q0 / (w + 1)
    top = factor * low

    if n == 2:
        points = (q0, q0 + top - low, q0 + factor * top - low, factor * q0)
        anchors = (
            (low, low, top),
            (low, top, top),
            (low, top, factor * top),
            (factor * low, factor * low, factor * top),
        )
        blocks = (RisingBlock(2, 2), RisingBlock(3, 3), RisingBlock(1, 1))
    else:
        mid = (1 + Fraction(1 - a, n - 2) * spread) * low
        q1 = q0 + mid - low
        q2 = q0 + top - low
        q3 = q0 + factor * top - low
        q4 = q3 + (n - 2) * (top - mid)
        q5 = q3 + (n - 2) * (factor * mid - mid)
        q6 = factor * q0
        points = (q0, q1, q2, q3, q4, q5, q6)
        anchors = (
            (low, low) + (mid,) * (n - 2) + (top,),
            (low,) + (mid,) * (n - 1) + (top,),
            (low,) + (mid,) * (n - 2) + (top, top),
            (low,) + (mid,) * (n - 2) + (top, factor * top),
            (low,) + (top,) * (n - 1) + (factor * top,),
            (low, top) + (factor * mid,) * (n - 2) + (factor * top,),
            (factor * low, factor * low) + (factor * mid,) * (n - 2) + (factor * top,),
        )
        blocks = (
            RisingBlock(2, 2),
            RisingBlock(n, n),
            RisingBlock(n + 1, n + 1),
            RisingBlock(2, n - 1),
            RisingBlock(3, n),
            RisingBlock(1, 1),
        )
    system = PLSystem(
        n=n,
        division_points=points,
        anchors=anchors,
        blocks=blocks,
        extension=Extension.dilation(factor),
    )
    system.validate().raise_if_invalid()
    return system


def build_family_a_infinite(
    n: int, a, q0=Fraction(1), periods: int = 8
) -> PLSystem:
    """Finite horizon of the unbounded-exponent variant of Family A.

    Period m plays the six-segment pattern at effective spread m+1, and the
    closing level of each period is exactly the opening level of the next,
    so consecutive periods glue with no seam data.  The result is a single
    finite system with period marks at the gluing points.
    """
    problems: list[str] = []
    if not isinstance(n, int) or n < 3:
        problems.append(f"dimension n must be an integer >= 3, got {n!r}")
    a = _as_fraction(a, "a", problems)
    q0 = _as_fraction(q0, "q0", problems)
    if isinstance(n, int) and n >= 3 and a is not None:
        lo = Fraction(1, n - 1)
        if not lo <= a <= 1:
            problems.append(
                f"slope share a={format_fraction(a)} outside [{format_fraction(lo)}, 1]"
            )
    if q0 is not None and q0 <= 0:
        problems.append("start point q0 must be positive")
    if not isinstance(periods, int) or periods < 2:
        problems.append("periods must be an integer >= 2")
    if problems:
        raise ParamError(problems)

    def levels(m: int, base: Fraction) -> tuple[Fraction, Fraction, Fraction]:
        spread = m + 1
        mid = (1 + Fraction(1 - a, n - 2) * spread) * base
        top = (1 + a * spread) * base
        return base, mid, top

    start = q0
    base = q0 / (n + 2)
    points: list[Fraction] = [start]
    anchors: list[tuple[Fraction, ...]] = []
    blocks: list[RisingBlock] = []
    low, mid, top = levels(0, base)
    anchors.append((low, low) + (mid,) * (n - 2) + (top,))
    for m in range(periods):
        low, mid, top = levels(m, base)
        base_next = top
        low2, mid2, top2 = levels(m + 1, base_next)
        u1 = start + (mid - low)
        u2 = start + (top - low)
        u3 = start + (top2 - low)
        u4 = u3 + (n - 2) * (top - mid)
        u5 = u3 + (n - 2) * (mid2 - mid)
        u6 = u5 + (top - low)
        points.extend((u1, u2, u3, u4, u5, u6))
        anchors.extend(
            (
                (low,) + (mid,) * (n - 1) + (top,),
                (low,) + (mid,) * (n - 2) + (top, top),
                (low,) + (mid,) * (n - 2) + (top, top2),
                (low,) + (top,) * (n - 1) + (top2,),
                (low, top) + (mid2,) * (n - 2) + (top2,),
                (low2, low2) + (mid2,) * (n - 2) + (top2,),
            )
        )
        blocks.extend(
            (
                RisingBlock(2, 2),
                RisingBlock(n, n),
                RisingBlock(n + 1, n + 1),
                RisingBlock(2, n - 1),
                RisingBlock(3, n),
                RisingBlock(1, 1),
            )
        )
        start = u6
        base = base_next
    system = PLSystem(
        n=n,
        division_points=tuple(points),
        anchors=tuple(anchors),
        blocks=tuple(blocks),
        extension=NO_EXTENSION,
        period_marks=tuple(6 * m for m in range(periods + 1)),
    )
    system.validate().raise_if_invalid()
    return system


def infinite_p1_ratio_max(n: int, a, m: int) -> Fraction:
    """Largest P_1/q over period m of the unbounded variant."""
    return Fraction(1, m + n + 2)


def infinite_top_ratio_min(n: int, a, m: int) -> Fraction:
    """Smallest P_{n+1}/q over period m of the unbounded variant."""
    a = Fraction(a)
    return (1 + a * (m + 1)) / (n + 1 + (1 + a) * (m + 1))


def infinite_top_ratio_limit(a) -> Fraction:
    """Limit of the per-period minima of P_{n+1}/q as the horizon grows."""
    a = Fraction(a)
    return a / (a + 1)


def build_family_b(params: FamilyBParams) -> PLSystem:
    """One period of Family B with exact dilation extension.

    The pattern raises component 2 to the third weight, then walks a
    ladder: each rung lets a coincident pair climb with slope 1/2 until the
    lower member reaches C times its weight, then lets the upper member
    climb alone to the next weight.  A final first-component climb closes
    the period at C.
    """
    _checked(params)
    n, C, A = params.n, params.C, params.A

    def weight(k: int) -> Fraction:
        return A[k - 1]

    values = list(A)
    q = Fraction(1)
    points: list[Fraction] = [q]
    anchors: list[tuple[Fraction, ...]] = [tuple(values)]
    blocks: list[RisingBlock] = []

    def climb(block: RisingBlock, target: Fraction) -> None:
        nonlocal q
        start = values[block.lo - 1]
        dq = (target - start) * block.size
        for j in range(block.lo - 1, block.hi):
            values[j] = target
        q = q + dq
        points.append(q)
        anchors.append(tuple(values))
        blocks.append(block)

    climb(RisingBlock(2, 2), weight(3))
    for k in range(2, n + 1):
        climb(RisingBlock(k, k + 1), C * weight(k))
        if k < n:
            climb(RisingBlock(k + 1, k + 1), weight(k + 2))
        else:
            climb(RisingBlock(n + 1, n + 1), C * weight(n + 1))
    climb(RisingBlock(1, 1), C * weight(1))

    system = PLSystem(
        n=n,
        division_points=tuple(points),
        anchors=tuple(anchors),
        blocks=tuple(blocks),
        extension=Extension.dilation(C),
    )
    system.validate().raise_if_invalid()
    return system


def default_params_b(n: int) -> FamilyBParams:
    """The dyadic weight vector with C=3 used as the reference point."""
    if not isinstance(n, int) or n < 3:
        raise ParamError([f"dimension n must be an integer >= 3, got {n!r}"])
    weights = (Fraction(1, 2**n),) + tuple(
        Fraction(1, 2 ** (n - k + 2)) for k in range(2, n + 2)
    )
    return FamilyBParams(n=n, C=Fraction(3), A=weights)


# -- published closed forms --------------------------------------------------


@dataclass(frozen=True)
class CrossCheckEntry:
    formula_id: str
    derived: Fraction
    printed: Fraction

    @property
    def match(self) -> bool:
        return self.derived == self.printed


@dataclass(frozen=True)
class CrossCheckReport:
    family: str
    entries: tuple[CrossCheckEntry, ...]

    @property
    def mismatches(self) -> tuple[CrossCheckEntry, ...]:
        return tuple(e for e in self.entries if not e.match)

    @property
    def all_match(self) -> bool:
        return not self.mismatches

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "family": self.family,
            "all_match": self.all_match,
            "entries": [
                {
                    "formula_id": e.formula_id,
                    "derived": format_fraction(e.derived),
                    "printed": format_fraction(e.printed),
                    "match": e.match,
                }
                for e in self.entries
            ],
        }


def _printed_a_points(params: FamilyAParams) -> dict[str, Fraction]:
    n, w, a, q = params.n, params.omega_hat, params.a, params.q0
    d = w - n
    c = 1 + a * d
    printed = {
        "q2": ((n + 1) + (1 + a) * d) / (w + 1) * q,
        "q3": (w + c * c) / (w + 1) * q,
        "period-end": c * q,
    }
    if n >= 3:
        printed["q1"] = ((n - 2) * (w + 1) + (1 - a) * d) / ((n - 2) * (w + 1)) * q
        printed["q4"] = (1 + c * (n + a * d)) / (w + 1) * q
        printed["q5"] = (1 + 2 * a * d + w * c) / (w + 1) * q
    return printed


def _printed_b_uniform_exponents(params: FamilyBParams) -> tuple[Fraction, ...]:
    n, C, A = params.n, params.C, params.A

    def s(j: int) -> Fraction:
        # A_2 + ... + A_j with 1-based weights.
        return sum(A[1:j], Fraction(0))

    a2 = A[1]
    printed = [Fraction(0)] * n
    printed[n - 1] = 1 / a2 - 1
    for k in range(2, n):
        printed[n - k] = (1 - a2 - s(k + 1) + C * A[k - 1]) / (a2 + C * s(k))
    printed[0] = (1 - a2 - s(n)) / (a2 + C * s(n - 1))
    return tuple(printed)


def _printed_b_peak_ratios(params: FamilyBParams) -> tuple[Fraction, ...]:
    n, C, A = params.n, params.C, params.A

    def s(j: int) -> Fraction:
        return sum(A[1:j], Fraction(0))

    printed = [A[0]]
    for k in range(2, n + 1):
        den = A[0] + C * s(k) + C * A[k - 1] + 1 - (A[1] + s(k + 1))
        printed.append(C * A[k - 1] / den)
    return tuple(printed)


def crosscheck_printed_formulas(family: str, params) -> CrossCheckReport:
    """Compare engine-derived quantities with the published closed forms.

    Every published formula value is recorded next to the derived one;
    disagreements are documented, never raised, so a discrepancy in a
    closed form cannot block the exact construction it annotates.
    """
    if family == "A":
        if not isinstance(params, FamilyAParams):
            raise ParamError(["family A crosscheck needs FamilyAParams"])
        _checked(params)
        if params.omega_hat == params.n:
            raise ParamError(
                ["published point formulas need a target exponent above n"]
            )
        system = build_family_a(params)
        printed = _printed_a_points(params)
        if params.n == 2:
            derived = {
                "q2": system.division_points[1],
                "q3": system.division_points[2],
                "period-end": system.division_points[3],
            }
        else:
            derived = {
                f"q{i}": system.division_points[i] for i in range(1, 6)
            }
            derived["period-end"] = system.division_points[6]
        entries = tuple(
            CrossCheckEntry(fid, derived[fid], printed[fid])
            for fid in sorted(printed, key=lambda f: (len(f), f))
        )
        return CrossCheckReport("A", entries)
    if family == "B":
        if not isinstance(params, FamilyBParams):
            raise ParamError(["family B crosscheck needs FamilyBParams"])
        _checked(params)
        from .exponents import profile_periodic

        profile = profile_periodic(build_family_b(params))
        printed_w = _printed_b_uniform_exponents(params)
        printed_f = _printed_b_peak_ratios(params)
        entries = [
            CrossCheckEntry(f"omega_hat[{d}]", profile.omega_hat[d], printed_w[d])
            for d in range(params.n)
        ]
        entries.extend(
            CrossCheckEntry(f"phi_bar[{k}]", profile.phi_bar[k - 1], printed_f[k - 1])
            for k in range(1, params.n + 1)
        )
        return CrossCheckReport("B", tuple(entries))
    raise ParamError([f"unknown family {family!r}"])


@dataclass(frozen=True)
class ShiftedPairReport:
    """Sup-norm gaps between two start-shifted copies at the period ends."""

    rho1: Fraction
    rho2: Fraction
    ratio: Fraction
    gaps: tuple[Fraction, ...]
    proportionality_exact: bool

    @property
    def unbounded(self) -> bool:
        return bool(self.gaps) and self.gaps[0] != 0 and self.proportionality_exact


def shifted_pair_divergence(
    params: FamilyAParams, rho1, rho2, periods: int = 8
) -> ShiftedPairReport:
    """Gap growth between Family A copies started at rho1 and rho2.

    Both copies are evaluated at the original period ends factor^m * q0.
    Past the first period the copies are exact dilations of each other, so
    the gap sequence is exactly geometric with the dilation ratio; the
    report records that proportionality check.
    """
    _checked(params)
    problems = []
    rho1 = _as_fraction(rho1, "rho1", problems)
    rho2 = _as_fraction(rho2, "rho2", problems)
    if not isinstance(periods, int) or periods < 1:
        problems.append("periods must be an integer >= 1")
    if params.omega_hat == params.n:
        problems.append("start shifts need a target exponent above n")
    if problems:
        raise ParamError(problems)
    base = build_family_a(params)
    q_last_switch = base.division_points[-2]
    if not params.q0 <= rho1 <= rho2 <= q_last_switch:
        raise ParamError(
            [
                f"start shifts must satisfy q0 <= rho1 <= rho2 <= "
                f"{format_fraction(q_last_switch)}"
            ]
        )
    first = build_family_a(dataclasses.replace(params, q0=rho1))
    second = build_family_a(dataclasses.replace(params, q0=rho2))
    factor = base.extension.factor
    gaps = []
    q = params.q0
    for _ in range(periods):
        q = factor * q
        v1 = first.evaluate(q)
        v2 = second.evaluate(q)
        gaps.append(max(abs(x - y) for x, y in zip(v1, v2)))
    proportional = all(
        gaps[m] * factor == gaps[m + 1] for m in range(len(gaps) - 1)
    )
    return ShiftedPairReport(
        rho1=rho1,
        rho2=rho2,
        ratio=factor,
        gaps=tuple(gaps),
        proportionality_exact=proportional,
    )
