"""Brute force successive minima for one-direction lattice deformations.

For a unit direction u with nonzero first coordinate, the gauge at time q
is s(x) = max(euclidean norm of x, e^q |x . u|).  The d-th minimum is the
smallest s-value of a d-th linearly independent integer point.  This
module finds them by enumerating a cube of integer points, keeping the
smallest gauge values, and greedily selecting independent witnesses with
exact rational rank checks.

This is deliberately the only floating point corner of the package: the
gauge mixes e^q with square roots, so exactness is impossible, and the
point of the oracle is to cross-check the exact engine from the outside.
Determinism is still guaranteed: gauge ties within 1e-12 are broken by
lexicographic coordinate order, so results do not depend on enumeration
chunking.

A cube of radius r certifies its minima only while every reported value
stays below r + 1, because any excluded point has euclidean norm, hence
gauge, at least r + 1.  Samples carry that sufficiency flag, and the
trajectory driver retries with doubled radius (or raises, if the radius
was forced) when it is off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cf import cf_float
from .systems import PLSystem

__all__ = [
    "InsufficientRadiusError",
    "DirectionVector",
    "MinimaSample",
    "gauge",
    "successive_minima",
    "trajectory",
    "minkowski_sum_margin",
    "CompareReport",
    "compare_to_system",
]

MAX_RADIUS = {2: 6000, 3: 300, 4: 40}
_TIE_TOL = 1e-12
_KEEP_LIMIT = 1 << 21


class InsufficientRadiusError(RuntimeError):
    """The enumeration cube cannot certify the minima at some parameter."""

    def __init__(self, q, radius, detail: str = ""):
        self.q = q
        self.radius = radius
        message = f"radius {radius} cannot certify the minima at q={q}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


@dataclass(frozen=True)
class DirectionVector:
    """Unit direction of the deformation, with its construction recorded."""

    u: tuple[float, ...]
    provenance: str

    @property
    def dim(self) -> int:
        return len(self.u)

    @classmethod
    def from_components(cls, components, provenance: str = "components"):
        vec = tuple(float(c) for c in components)
        if len(vec) < 2:
            raise ValueError("a direction needs at least two components")
        norm = math.sqrt(sum(c * c for c in vec))
        if norm == 0:
            raise ValueError("zero direction")
        unit = tuple(c / norm for c in vec)
        if unit[0] == 0:
            raise ValueError("first component of the direction must be nonzero")
        return cls(u=unit, provenance=provenance)

    @classmethod
    def from_cf(cls, text: str, depth: int = 40) -> "DirectionVector":
        theta = cf_float(text, depth)
        return cls.from_components((1.0, theta), provenance=f"cf {text.strip()}")

    @classmethod
    def from_spec(cls, text: str) -> "DirectionVector":
        spec = text.strip()
        if spec.startswith("cf:"):
            return cls.from_cf(spec[3:])
        parts = [p.strip() for p in spec.split(",")]
        if any(not p for p in parts):
            raise ValueError(f"malformed direction {text!r}")
        return cls.from_components([float(p) for p in parts], provenance=spec)


@dataclass(frozen=True)
class MinimaSample:
    q: float
    radius: int
    L: tuple[float, ...]
    witnesses: tuple[tuple[int, ...], ...]
    sufficient: bool


def gauge(direction: DirectionVector, q: float, x) -> float:
    """The deformed gauge of one integer point, recomputed from scratch."""
    norm = math.sqrt(sum(float(c) ** 2 for c in x))
    dot = abs(sum(float(c) * u for c, u in zip(x, direction.u)))
    return max(norm, math.exp(q) * dot)


def _extend_basis(basis, coords) -> bool:
    row = [Fraction(c) for c in coords]
    for pivot_col, pivot_row in basis:
        if row[pivot_col] != 0:
            scale = row[pivot_col] / pivot_row[pivot_col]
            row = [a - scale * b for a, b in zip(row, pivot_row)]
    for col, value in enumerate(row):
        if value != 0:
            basis.append((col, row))
            return True
    return False


def _enumerate(direction: DirectionVector, q: float, radius: int, keep: int,
               chunk: int):
    """One enumeration pass; None means the keep buffer was too small."""
    dim = direction.dim
    side = 2 * radius + 1
    total = side**dim
    u = np.array(direction.u, dtype=np.float64)
    weight = math.exp(q)
    powers = [side ** (dim - 1 - j) for j in range(dim)]
    origin_flat = sum(radius * p for p in powers)
    kept_coords = []
    kept_s = []
    dropped_min = math.inf
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        if start <= origin_flat < stop:
            idx = idx[idx != origin_flat]
        coords = np.empty((idx.size, dim), dtype=np.int64)
        rem = idx
        for j, p in enumerate(powers):
            digit = rem // p
            coords[:, j] = digit - radius
            rem = rem - digit * p
        pts = coords.astype(np.float64)
        norms = np.sqrt(np.einsum("ij,ij->i", pts, pts))
        dots = np.abs(pts @ u)
        s = np.maximum(norms, weight * dots)
        if s.size > keep:
            cut = np.argpartition(s, keep)[:keep]
            dropped_min = min(dropped_min, float(np.partition(s, keep)[keep]))
            coords = coords[cut]
            s = s[cut]
        kept_coords.append(coords)
        kept_s.append(s)
    all_coords = np.concatenate(kept_coords)
    all_s = np.concatenate(kept_s)
    if all_s.size > keep:
        cut = np.argpartition(all_s, keep)[:keep]
        dropped_min = min(dropped_min, float(np.partition(all_s, keep)[keep]))
        all_coords = all_coords[cut]
        all_s = all_s[cut]
    order = np.argsort(all_s, kind="stable")
    all_coords = all_coords[order]
    all_s = all_s[order]

    basis: list = []
    witnesses: list[tuple[int, ...]] = []
    values: list[float] = []
    i = 0
    count = int(all_s.size)
    while len(witnesses) < dim and i < count:
        j = i + 1
        while j < count and all_s[j] - all_s[i] <= _TIE_TOL:
            j += 1
        group = sorted(
            (tuple(int(c) for c in all_coords[g]), float(all_s[g]))
            for g in range(i, j)
        )
        for coords_t, s_value in group:
            if len(witnesses) == dim:
                break
            if _extend_basis(basis, coords_t):
                witnesses.append(coords_t)
                values.append(s_value)
        i = j
    if len(witnesses) < dim:
        if math.isinf(dropped_min):
            raise AssertionError("cube holds fewer independent points than dim")
        return None
    if values[-1] >= dropped_min - _TIE_TOL:
        return None
    sufficient = values[-1] < radius + 1 - 1e-9
    return MinimaSample(
        q=float(q),
        radius=radius,
        L=tuple(math.log(v) for v in values),
        witnesses=tuple(witnesses),
        sufficient=sufficient,
    )


def successive_minima(
    direction: DirectionVector,
    q: float,
    radius: int,
    keep: int = 4096,
    chunk: int = 1 << 22,
) -> MinimaSample:
    """All dim successive minima at one parameter, with witnesses.

    The keep buffer grows automatically whenever the kept candidate set
    cannot certify the result, so the answer never depends on it.
    """
    if not isinstance(radius, int) or radius < 1:
        raise ValueError("radius must be a positive integer")
    q = float(q)
    if q < 0:
        raise ValueError("the parameter q must be nonnegative")
    if q > 600:
        raise ValueError("parameter too large for float gauge weights")
    keep = max(int(keep), 16 * direction.dim)
    while True:
        sample = _enumerate(direction, q, radius, keep, chunk)
        if sample is not None:
            return sample
        if keep >= _KEEP_LIMIT:
            raise InsufficientRadiusError(
                q, radius, "candidate buffer exhausted"
            )
        keep = min(keep * 8, _KEEP_LIMIT)


def _schedule_radius(q: float, dim: int, cap: int) -> int:
    return min(math.ceil(2.5 * math.exp(q / dim)) + 5, cap)


def trajectory(
    direction: DirectionVector,
    q_grid,
    radius: int = None,
    max_radius: int = None,
) -> tuple[MinimaSample, ...]:
    """Certified minima along an increasing parameter grid.

    With ``radius`` given, that radius is used as is and an uncertified
    sample raises.  Otherwise the radius follows a growth schedule and is
    doubled on demand up to a per-dimension cap.
    """
    dim = direction.dim
    if dim not in MAX_RADIUS:
        raise ValueError(
            f"enumeration supports dimensions {sorted(MAX_RADIUS)}, got {dim}"
        )
    grid = [float(v) for v in q_grid]
    if not grid:
        raise ValueError("empty parameter grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("parameter grid must strictly increase")
    cap = int(max_radius) if max_radius is not None else MAX_RADIUS[dim]
    samples = []
    for q in grid:
        if radius is not None:
            sample = successive_minima(direction, q, radius)
            if not sample.sufficient:
                raise InsufficientRadiusError(q, radius, "forced radius too small")
        else:
            r = _schedule_radius(q, dim, cap)
            while True:
                sample = successive_minima(direction, q, r)
                if sample.sufficient:
                    break
                if r >= cap:
                    raise InsufficientRadiusError(
                        q, r, f"radius cap {cap} reached"
                    )
                r = min(2 * r, cap)
        samples.append(sample)
    return tuple(samples)


def minkowski_sum_margin(samples) -> float:
    """Largest deviation of sum(L) from q along a trajectory."""
    return max(abs(sum(s.L) - s.q) for s in samples)


@dataclass(frozen=True)
class CompareReport:
    """Deviation of oracle minima from an exact system along a grid.

    Boundedness is judged by comparing the later half of the grid against
    the earlier half with half a unit of forgiveness; a genuinely linear
    divergence fails that quickly.
    """

    max_deviation: float
    argmax_q: float
    first_half_max: float
    second_half_max: float
    bounded: bool
    compared: int
    skipped: int


def compare_to_system(samples, system: PLSystem) -> CompareReport:
    """Sup deviation between log-minima and system components on a grid.

    Samples outside the system's domain are skipped but counted; the grid
    values are converted exactly, so the system side stays exact until the
    final float comparison.
    """
    if not samples:
        raise ValueError("no samples to compare")
    dim = len(samples[0].L)
    if system.n + 1 != dim:
        raise ValueError(
            f"system has {system.n + 1} components, samples have {dim}"
        )
    devs: list[tuple[float, float]] = []
    skipped = 0
    for sample in samples:
        q = Fraction(sample.q)
        if q < system.q_start or (not system.is_dilation and q > system.q_end):
            skipped += 1
            continue
        values = system.evaluate(q)
        dev = max(abs(l - float(v)) for l, v in zip(sample.L, values))
        devs.append((sample.q, dev))
    if not devs:
        raise ValueError("every sample lies outside the system's domain")
    max_q, max_dev = max(devs, key=lambda t: t[1])
    half = len(devs) // 2
    first = max(d for _, d in devs[: half or 1])
    second = max(d for _, d in devs[half:])
    return CompareReport(
        max_deviation=max_dev,
        argmax_q=max_q,
        first_half_max=first,
        second_half_max=second,
        bounded=second <= first + 0.5,
        compared=len(devs),
        skipped=skipped,
    )
