"""Rank experiments for the exponent maps of Family B.

The family is parametrized by n free coordinates (the factor C and the
middle weights A_2, ..., A_n), and two maps into n-space are studied: the
tuple of uniform exponents and the tuple of peak component ratios.  On a
neighbourhood where every extremum stays at the same division point, both
maps are rational in the parameters, so exact central differences at a
rational step recover exact local data; a full-rank Jacobian certifies
local independence of the n output coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exponents import (
    component_extrema_periodic,
    profile_periodic,
    ratio_extrema_periodic,
)
from .families import FamilyBParams, ParamError, build_family_b, default_params_b
from .rationals import format_fraction
from .systems import PLSystem

__all__ = [
    "ParamPoint",
    "default_point",
    "uniform_exponent_map",
    "peak_ratio_map",
    "RankCertificate",
    "jacobian_rank",
    "specialized_closed_forms",
]

MAP_NAMES = ("W", "F")


@dataclass(frozen=True)
class ParamPoint:
    """Free coordinates (C, A_2, ..., A_n); the tied weights are implied.

    A_1 repeats A_2 and A_{n+1} absorbs the rest of the unit total, so the
    point determines a full weight vector.
    """

    n: int
    C: Fraction
    A_mid: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "C", Fraction(self.C))
        object.__setattr__(self, "A_mid", tuple(Fraction(v) for v in self.A_mid))
        if isinstance(self.n, int) and len(self.A_mid) != max(self.n - 1, 0):
            raise ParamError(
                [f"expected {self.n - 1} middle weights, got {len(self.A_mid)}"]
            )

    def to_params(self) -> FamilyBParams:
        a2 = self.A_mid[0]
        top = 1 - a2 - sum(self.A_mid, Fraction(0))
        return FamilyBParams(n=self.n, C=self.C, A=(a2,) + self.A_mid + (top,))

    def coordinates(self) -> tuple[Fraction, ...]:
        return (self.C,) + self.A_mid

    @classmethod
    def from_coordinates(cls, n: int, coords) -> "ParamPoint":
        coords = tuple(Fraction(v) for v in coords)
        return cls(n=n, C=coords[0], A_mid=coords[1:])

    def admissible(self) -> bool:
        return not self.to_params().validate()


def default_point(n: int) -> ParamPoint:
    params = default_params_b(n)
    return ParamPoint(n=n, C=params.C, A_mid=params.A[1:n])


def _system(point: ParamPoint) -> PLSystem:
    params = point.to_params()
    problems = params.validate()
    if problems:
        raise ParamError(problems)
    return build_family_b(params)


def uniform_exponent_map(point: ParamPoint) -> tuple[Fraction, ...]:
    """The n uniform exponents of the system at this parameter point."""
    return tuple(profile_periodic(_system(point)).omega_hat)


def peak_ratio_map(point: ParamPoint) -> tuple[Fraction, ...]:
    """The peak ratios of components 1..n at this parameter point."""
    return tuple(profile_periodic(_system(point)).phi_bar[: point.n])


def _argmax_signature(map_name: str, point: ParamPoint) -> tuple[int, ...]:
    system = _system(point)
    if map_name == "W":
        return tuple(
            ratio_extrema_periodic(system, k).argmax_index
            for k in range(1, point.n + 1)
        )
    return tuple(
        component_extrema_periodic(system, d).argmax_index
        for d in range(1, point.n + 1)
    )


def _exact_rank(matrix) -> tuple[int, tuple[Fraction, ...]]:
    """Row echelon rank with partial pivoting; returns pivot magnitudes."""
    work = [list(row) for row in matrix]
    rows = len(work)
    cols = len(work[0]) if rows else 0
    rank = 0
    pivots: list[Fraction] = []
    for col in range(cols):
        best = None
        best_abs = Fraction(0)
        for i in range(rank, rows):
            mag = abs(work[i][col])
            if mag > best_abs:
                best, best_abs = i, mag
        if best is None:
            continue
        work[rank], work[best] = work[best], work[rank]
        pivots.append(best_abs)
        pivot = work[rank][col]
        for i in range(rank + 1, rows):
            if work[i][col] != 0:
                scale = work[i][col] / pivot
                work[i] = [a - scale * b for a, b in zip(work[i], work[rank])]
        rank += 1
        if rank == rows:
            break
    return rank, tuple(pivots)


@dataclass(frozen=True)
class RankCertificate:
    map_name: str
    point: ParamPoint
    h: Fraction
    rank: int
    pivots: tuple[Fraction, ...]
    jacobian: tuple[tuple[Fraction, ...], ...]
    signature: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "map": self.map_name,
            "n": self.point.n,
            "point": {
                "C": format_fraction(self.point.C),
                "A_mid": [format_fraction(v) for v in self.point.A_mid],
            },
            "h": format_fraction(self.h),
            "rank": self.rank,
            "pivots": [format_fraction(p) for p in self.pivots],
            "jacobian": [
                [format_fraction(v) for v in row] for row in self.jacobian
            ],
            "argmax_signature": list(self.signature),
        }


def jacobian_rank(map_name: str, point: ParamPoint, h) -> RankCertificate:
    """Exact central-difference Jacobian of one exponent map.

    The step is halved until every stencil point is admissible and keeps
    the same argmax signature as the center, which pins the whole stencil
    to one rational branch of the map.  Everything is computed in exact
    arithmetic, so reruns reproduce the certificate bit for bit.
    """
    if map_name not in MAP_NAMES:
        raise ParamError([f"unknown map {map_name!r}, expected one of {MAP_NAMES}"])
    h = Fraction(h)
    if h <= 0:
        raise ParamError(["step h must be positive"])
    if not point.admissible():
        raise ParamError(list(point.to_params().validate()))
    func = uniform_exponent_map if map_name == "W" else peak_ratio_map
    n = point.n
    center = point.coordinates()
    signature = _argmax_signature(map_name, point)

    for _ in range(40):
        stencil: list[tuple[ParamPoint, ParamPoint]] = []
        stable = True
        for j in range(n):
            shifted = []
            for sign in (1, -1):
                coords = list(center)
                coords[j] += sign * h
                candidate = ParamPoint.from_coordinates(n, coords)
                if not candidate.admissible() or (
                    _argmax_signature(map_name, candidate) != signature
                ):
                    stable = False
                    break
                shifted.append(candidate)
            if not stable:
                break
            stencil.append((shifted[0], shifted[1]))
        if stable:
            break
        h = h / 2
    else:
        raise ParamError(
            ["no admissible signature-stable stencil found while halving h"]
        )

    columns = []
    for plus, minus in stencil:
        fp = func(plus)
        fm = func(minus)
        columns.append(tuple((a - b) / (2 * h) for a, b in zip(fp, fm)))
    jacobian = tuple(
        tuple(columns[j][i] for j in range(n)) for i in range(n)
    )
    rank, pivots = _exact_rank(jacobian)
    return RankCertificate(
        map_name=map_name,
        point=point,
        h=h,
        rank=rank,
        pivots=pivots,
        jacobian=jacobian,
        signature=signature,
    )


def specialized_closed_forms(map_name: str, A) -> tuple[Fraction, ...]:
    """Published degenerate limits of the closed forms, evaluated exactly.

    For the uniform exponent map this is the formal limit C -> 0, whose
    first two coordinates collapse to one value; for the peak ratio map it
    is the formal limit C -> infinity, whose second coordinate is 1/2.
    Both limits depend only on the weight vector.
    """
    if map_name not in MAP_NAMES:
        raise ParamError([f"unknown map {map_name!r}, expected one of {MAP_NAMES}"])
    A = tuple(Fraction(v) for v in A)
    n = len(A) - 1
    problems = []
    if n < 3:
        problems.append("need at least four weights")
    elif A[0] != A[1]:
        problems.append("A_1 must equal A_2")
    if any(v <= 0 for v in A):
        problems.append("weights must be positive")
    if sum(A, Fraction(0)) != 1:
        problems.append("weights must sum to 1")
    if problems:
        raise ParamError(problems)

    def s(j: int) -> Fraction:
        # A_2 + ... + A_j with 1-based weights.
        return sum(A[1:j], Fraction(0))

    a2 = A[1]
    if map_name == "W":
        values = [Fraction(0)] * n
        values[n - 1] = (1 - a2) / a2
        for k in range(2, n):
            values[n - k] = (1 - a2 - s(k + 1)) / a2
        values[0] = (1 - a2 - s(n)) / a2
        return tuple(values)
    values = [a2]
    for k in range(2, n + 1):
        values.append(A[k - 1] / (s(k) + A[k - 1]))
    return tuple(values)
