"""Exponent profiles read off from ratio extrema at division points.

Each partial sum S_k(q) = P_1(q) + ... + P_k(q) is piecewise linear in q,
so S_k(q)/q is monotone on every segment and takes its extreme values at
division points.  Over one fundamental period of a dilation system the
extrema therefore come from a finite scan, and the standard dictionary
turns them into the approximation exponents:

    uniform exponent at position n-k   = 1 / max(S_k/q) - 1
    ordinary exponent at position n-k  = 1 / min(S_k/q) - 1

with the convention that a zero extremum maps to infinity.  The single
component ratios P_d(q)/q get the same treatment and feed the peak and
valley ratio tables.  Ties are resolved toward the smallest q and their
multiplicity is recorded in the profile notes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .rationals import INF, Infinity, format_extended, format_fraction
from .systems import PLSystem, PointGroup

__all__ = [
    "InsufficientDataError",
    "RatioExtrema",
    "ratio_extrema_periodic",
    "component_extrema_periodic",
    "ExponentProfile",
    "profile_periodic",
    "SampledProfile",
    "profile_sampled",
    "export_division_table",
    "write_division_csv",
]

ExtRational = Union[Fraction, Infinity]


class InsufficientDataError(ValueError):
    """The available horizon is too short for the requested estimate."""


@dataclass(frozen=True)
class RatioExtrema:
    """Extreme values of one ratio over a scan of division points."""

    max_value: Fraction
    argmax: Fraction
    argmax_index: int
    max_count: int
    min_value: Fraction
    argmin: Fraction
    argmin_index: int
    min_count: int


def _scan_ratios(values: list[tuple[Fraction, Fraction]]) -> RatioExtrema:
    """Extrema of (q, ratio) pairs; ties keep the smallest q and are counted."""
    max_value = min_value = None
    argmax = argmin = None
    argmax_index = argmin_index = -1
    max_count = min_count = 0
    for index, (q, ratio) in enumerate(values):
        if max_value is None or ratio > max_value:
            max_value, argmax, argmax_index, max_count = ratio, q, index, 1
        elif ratio == max_value:
            max_count += 1
        if min_value is None or ratio < min_value:
            min_value, argmin, argmin_index, min_count = ratio, q, index, 1
        elif ratio == min_value:
            min_count += 1
    return RatioExtrema(
        max_value, argmax, argmax_index, max_count,
        min_value, argmin, argmin_index, min_count,
    )


def _periodic_groups(system: PLSystem) -> tuple[PointGroup, ...]:
    if not system.is_dilation:
        raise ValueError(
            "periodic extrema need a dilation extension; "
            "use profile_sampled on finite systems with period marks"
        )
    if not any(b.covers(1) for _, b in system.effective_segments()):
        raise ValueError(
            "the first component never rises, so the exponent dictionary "
            "does not apply"
        )
    # The final group repeats the first one scaled, so it is dropped.
    return system.point_groups()[:-1]


def ratio_extrema_periodic(system: PLSystem, k: int) -> RatioExtrema:
    """Extrema of S_k(q)/q over one fundamental period."""
    if not 1 <= k <= system.n + 1:
        raise ValueError(f"partial sum order k={k} outside 1..{system.n + 1}")
    groups = _periodic_groups(system)
    pairs = [
        (g.q, sum(g.anchor[:k], Fraction(0)) / g.q) for g in groups
    ]
    return _scan_ratios(pairs)


def component_extrema_periodic(system: PLSystem, d: int) -> RatioExtrema:
    """Extrema of P_d(q)/q over one fundamental period."""
    if not 1 <= d <= system.n + 1:
        raise ValueError(f"component d={d} outside 1..{system.n + 1}")
    groups = _periodic_groups(system)
    pairs = [(g.q, g.anchor[d - 1] / g.q) for g in groups]
    return _scan_ratios(pairs)


def _exponent_from_ratio(ratio: Fraction) -> ExtRational:
    if ratio == 0:
        return INF
    return 1 / ratio - 1


@dataclass(frozen=True)
class ExponentProfile:
    """Exponents and component ratio extrema of one system.

    ``omega_hat[d]`` and ``omega[d]`` are indexed by position d = 0..n-1;
    ``phi_bar[d-1]`` and ``phi_under[d-1]`` hold the extreme ratios of
    component d = 1..n+1.  ``notes`` flags every extremum attained at more
    than one division point.
    """

    n: int
    omega_hat: tuple[ExtRational, ...]
    omega: tuple[ExtRational, ...]
    phi_bar: tuple[Fraction, ...]
    phi_under: tuple[Fraction, ...]
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "omega_hat": [format_extended(v) for v in self.omega_hat],
            "omega": [format_extended(v) for v in self.omega],
            "phi_bar": [format_fraction(v) for v in self.phi_bar],
            "phi_under": [format_fraction(v) for v in self.phi_under],
            "notes": list(self.notes),
        }


def _profile_from_pairs(
    n: int, pair_table: list[list[tuple[Fraction, Fraction]]]
) -> ExponentProfile:
    """Build a profile from per-k partial sum pairs and per-d component pairs.

    ``pair_table`` holds n+1 lists of (q, component ratio) scans followed by
    n lists of (q, partial sum ratio) scans; see the callers for layout.
    """
    component_pairs = pair_table[: n + 1]
    psum_pairs = pair_table[n + 1 :]
    notes: list[str] = []
    omega_hat: list[ExtRational] = [None] * n
    omega: list[ExtRational] = [None] * n
    for k in range(1, n + 1):
        extrema = _scan_ratios(psum_pairs[k - 1])
        omega_hat[n - k] = _exponent_from_ratio(extrema.max_value)
        omega[n - k] = _exponent_from_ratio(extrema.min_value)
        if extrema.max_count > 1:
            notes.append(
                f"partial sum {k}: maximum attained at {extrema.max_count} points"
            )
        if extrema.min_count > 1:
            notes.append(
                f"partial sum {k}: minimum attained at {extrema.min_count} points"
            )
    phi_bar: list[Fraction] = []
    phi_under: list[Fraction] = []
    for d in range(1, n + 2):
        extrema = _scan_ratios(component_pairs[d - 1])
        phi_bar.append(extrema.max_value)
        phi_under.append(extrema.min_value)
        if extrema.max_count > 1:
            notes.append(
                f"component {d}: maximum attained at {extrema.max_count} points"
            )
        if extrema.min_count > 1:
            notes.append(
                f"component {d}: minimum attained at {extrema.min_count} points"
            )
    return ExponentProfile(
        n=n,
        omega_hat=tuple(omega_hat),
        omega=tuple(omega),
        phi_bar=tuple(phi_bar),
        phi_under=tuple(phi_under),
        notes=tuple(notes),
    )


def _pair_table(n: int, scan: list[tuple[Fraction, tuple[Fraction, ...]]]):
    table: list[list[tuple[Fraction, Fraction]]] = []
    for d in range(1, n + 2):
        table.append([(q, anchor[d - 1] / q) for q, anchor in scan])
    for k in range(1, n + 1):
        table.append(
            [(q, sum(anchor[:k], Fraction(0)) / q) for q, anchor in scan]
        )
    return table


def profile_periodic(system: PLSystem) -> ExponentProfile:
    """Exact exponent profile of a dilation system."""
    groups = _periodic_groups(system)
    scan = [(g.q, g.anchor) for g in groups]
    return _profile_from_pairs(system.n, _pair_table(system.n, scan))


@dataclass(frozen=True)
class SampledProfile:
    """Per-period exponent estimates over a finite horizon.

    ``period_profiles[m]`` is the profile read off from period m alone and
    ``headline`` repeats the last of them; ``overall`` scans the whole
    horizon at once.  The two ratio sequences track the quantities whose
    trend decides divergence of the top uniform exponent.
    """

    n: int
    period_profiles: tuple[ExponentProfile, ...]
    headline: ExponentProfile
    overall: ExponentProfile
    period_p1_ratio_max: tuple[Fraction, ...]
    period_top_ratio_min: tuple[Fraction, ...]
    omega_hat_top_diverging: bool

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "periods": len(self.period_profiles),
            "headline": self.headline.to_json_dict(),
            "overall": self.overall.to_json_dict(),
            "period_profiles": [p.to_json_dict() for p in self.period_profiles],
            "period_p1_ratio_max": [
                format_fraction(v) for v in self.period_p1_ratio_max
            ],
            "period_top_ratio_min": [
                format_fraction(v) for v in self.period_top_ratio_min
            ],
            "omega_hat_top_diverging": self.omega_hat_top_diverging,
        }


def _dedupe(points, anchors, lo: int, hi: int):
    scan: list[tuple[Fraction, tuple[Fraction, ...]]] = []
    for i in range(lo, hi + 1):
        if scan and scan[-1][0] == points[i]:
            continue
        scan.append((points[i], anchors[i]))
    return scan


def profile_sampled(system: PLSystem, q_max=None) -> SampledProfile:
    """Horizon estimates from a finite system cut by its period marks.

    Requires at least two full periods inside the horizon; fewer raise
    ``InsufficientDataError``.  A partial trailing period is ignored.
    """
    if system.period_marks is None:
        raise InsufficientDataError("system carries no period marks")
    points = system.division_points
    marks = list(system.period_marks)
    if q_max is not None:
        limit = Fraction(q_max)
        marks = [m for m in marks if points[m] <= limit]
    if len(marks) < 3:
        raise InsufficientDataError(
            "horizon covers fewer than two full periods"
        )
    profiles: list[ExponentProfile] = []
    p1_max: list[Fraction] = []
    top_min: list[Fraction] = []
    for lo, hi in zip(marks, marks[1:]):
        scan = _dedupe(points, system.anchors, lo, hi)
        profiles.append(_profile_from_pairs(system.n, _pair_table(system.n, scan)))
        p1_max.append(
            _scan_ratios([(q, a[0] / q) for q, a in scan]).max_value
        )
        top_min.append(
            _scan_ratios([(q, a[-1] / q) for q, a in scan]).min_value
        )
    overall_scan = _dedupe(points, system.anchors, marks[0], marks[-1])
    overall = _profile_from_pairs(system.n, _pair_table(system.n, overall_scan))
    diverging = all(b < a for a, b in zip(p1_max, p1_max[1:]))
    return SampledProfile(
        n=system.n,
        period_profiles=tuple(profiles),
        headline=profiles[-1],
        overall=overall,
        period_p1_ratio_max=tuple(p1_max),
        period_top_ratio_min=tuple(top_min),
        omega_hat_top_diverging=diverging,
    )


@dataclass(frozen=True)
class DivisionRow:
    q: Fraction
    kind: str
    values: tuple[Fraction, ...]
    partial_sums: tuple[Fraction, ...]
    ratios: tuple[Fraction, ...]


def export_division_table(system: PLSystem, periods: int = 1) -> tuple[DivisionRow, ...]:
    """One row per distinct division point, optionally over several periods."""
    if system.is_dilation and periods > 1:
        target = system.unroll(periods)
    else:
        target = system
    rows = []
    for group in target.point_groups():
        sums = []
        total = Fraction(0)
        for v in group.anchor:
            total += v
            sums.append(total)
        rows.append(
            DivisionRow(
                q=group.q,
                kind=group.kind.value,
                values=group.anchor,
                partial_sums=tuple(sums),
                ratios=tuple(s / group.q for s in sums),
            )
        )
    return tuple(rows)


def write_division_csv(path, system: PLSystem, periods: int = 1) -> int:
    """Write the division point table as CSV; returns the row count.

    Values are exact fraction strings; the parameter and the ratios get
    float companion columns for direct plotting.
    """
    rows = export_division_table(system, periods)
    width = system.n + 1
    header = (
        ["q", "q_float", "kind"]
        + [f"P_{d}" for d in range(1, width + 1)]
        + [f"S_{k}" for k in range(1, width + 1)]
        + [f"R_{k}" for k in range(1, width + 1)]
        + [f"R_{k}_float" for k in range(1, width + 1)]
    )
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [format_fraction(row.q), float(row.q), row.kind]
                + [format_fraction(v) for v in row.values]
                + [format_fraction(s) for s in row.partial_sums]
                + [format_fraction(r) for r in row.ratios]
                + [float(r) for r in row.ratios]
            )
    return len(rows)
