"""Generalized (n+1)-systems as exact piecewise linear data.

A system stores the combinatorial skeleton of n+1 ordered piecewise linear
functions: division points q_0 <= ... <= q_M, the sorted value vector
(anchor) at each point, and one rising block per segment.  Between
consecutive points exactly the block components rise, each with slope
1/(block size); every other component is constant.  Everything else
(evaluation, classification, extension to large parameters) derives from
this data with exact rational arithmetic.

Zero-length segments (q_i = q_{i+1}) are legal: they represent parameter
choices where two construction events collapse, and keeping them makes
constructors total over closed parameter ranges while keeping anchor tables
index-aligned across a parameter sweep.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .rationals import format_fraction, parse_fraction

__all__ = [
    "DomainError",
    "DivisionPointKind",
    "RisingBlock",
    "Extension",
    "NO_EXTENSION",
    "Violation",
    "ValidationReport",
    "PointGroup",
    "PLSystem",
]


class DomainError(ValueError):
    """Evaluation outside the domain of a system."""


class DivisionPointKind(Enum):
    ORDINARY = "ordinary"
    SWITCH = "switch"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class RisingBlock:
    """Inclusive 1-based run of components that rise together on a segment."""

    lo: int
    hi: int

    def __post_init__(self):
        if not isinstance(self.lo, int) or not isinstance(self.hi, int):
            raise TypeError("block bounds must be integers")
        if self.lo < 1 or self.hi < self.lo:
            raise ValueError(f"bad rising block ({self.lo}, {self.hi})")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    @property
    def slope(self) -> Fraction:
        return Fraction(1, self.size)

    def covers(self, component: int) -> bool:
        return self.lo <= component <= self.hi

    def as_pair(self) -> tuple[int, int]:
        return (self.lo, self.hi)


@dataclass(frozen=True)
class Extension:
    """How a system continues past its last division point.

    "none" leaves the domain at [q_0, q_M].  "dilation" extends by exact
    self-similarity P(q) = factor^m * P(q / factor^m), which requires the
    last anchor to be the first anchor scaled by the factor.
    """

    kind: str
    factor: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in ("none", "dilation"):
            raise ValueError(f"unknown extension kind {self.kind!r}")
        if self.kind == "dilation":
            factor = Fraction(self.factor)
            if factor <= 1:
                raise ValueError("dilation factor must exceed 1")
            object.__setattr__(self, "factor", factor)
        elif self.factor is not None:
            raise ValueError("finite extension takes no factor")

    @classmethod
    def dilation(cls, factor) -> "Extension":
        return cls("dilation", Fraction(factor))


NO_EXTENSION = Extension("none")


@dataclass(frozen=True)
class Violation:
    code: str
    where: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_if_invalid(self) -> None:
        if self.violations:
            text = "; ".join(
                f"[{v.code}] {v.where}: {v.detail}" for v in self.violations
            )
            raise ValueError(f"invalid system: {text}")

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "valid": self.ok,
            "violations": [
                {"code": v.code, "where": v.where, "detail": v.detail}
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class PointGroup:
    """All division-point indices sharing one parameter value."""

    q: Fraction
    anchor: tuple[Fraction, ...]
    kind: DivisionPointKind
    indices: tuple[int, ...]


def _classify_pair(left: RisingBlock, right: RisingBlock) -> DivisionPointKind:
    # Identical blocks mean the map continues linearly; treated as ordinary.
    if left.as_pair() == right.as_pair():
        return DivisionPointKind.ORDINARY
    if left.lo < right.hi:
        return DivisionPointKind.ORDINARY
    return DivisionPointKind.SWITCH


@dataclass(frozen=True)
class PLSystem:
    """A generalized (n+1)-system on [q_0, q_M], optionally dilation-extended.

    ``division_points`` is weakly increasing; ``anchors[i]`` is the sorted
    value vector at ``division_points[i]``; ``blocks[i]`` is the rising block
    on segment i.  ``period_marks``, when present, are indices that cut the
    point list into consecutive horizon slices (used by sampled exponent
    estimation); the first and last point of the covered range are included.
    """

    n: int
    division_points: tuple[Fraction, ...]
    anchors: tuple[tuple[Fraction, ...], ...]
    blocks: tuple[RisingBlock, ...]
    extension: Extension = NO_EXTENSION
    period_marks: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(
            self,
            "division_points",
            tuple(Fraction(q) for q in self.division_points),
        )
        object.__setattr__(
            self,
            "anchors",
            tuple(tuple(Fraction(v) for v in a) for a in self.anchors),
        )
        object.__setattr__(
            self,
            "blocks",
            tuple(
                b if isinstance(b, RisingBlock) else RisingBlock(int(b[0]), int(b[1]))
                for b in self.blocks
            ),
        )
        if self.period_marks is not None:
            object.__setattr__(
                self, "period_marks", tuple(int(i) for i in self.period_marks)
            )

    # -- basic geometry -----------------------------------------------------

    @property
    def q_start(self) -> Fraction:
        return self.division_points[0]

    @property
    def q_end(self) -> Fraction:
        return self.division_points[-1]

    @property
    def is_dilation(self) -> bool:
        return self.extension.kind == "dilation"

    def effective_segments(self) -> tuple[tuple[int, RisingBlock], ...]:
        """Segments with positive length, as (segment index, block) pairs."""
        q = self.division_points
        return tuple(
            (i, self.blocks[i]) for i in range(len(q) - 1) if q[i + 1] > q[i]
        )

    # -- evaluation ---------------------------------------------------------

    def _reduce(self, x: Fraction) -> tuple[Fraction, Fraction]:
        """Map x into the stored interval, returning (reduced x, scale)."""
        if x < self.q_start:
            raise DomainError(
                f"parameter {format_fraction(x)} below domain start "
                f"{format_fraction(self.q_start)}"
            )
        if x <= self.q_end:
            return x, Fraction(1)
        if not self.is_dilation:
            raise DomainError(
                f"parameter {format_fraction(x)} beyond finite domain end "
                f"{format_fraction(self.q_end)}"
            )
        factor = self.extension.factor
        scale = Fraction(1)
        while x > self.q_end:
            x = x / factor
            scale = scale * factor
        return x, scale

    def evaluate(self, q) -> tuple[Fraction, ...]:
        """Component values (P_1, ..., P_{n+1}) at q, sorted ascending."""
        x, scale = self._reduce(Fraction(q))
        points = self.division_points
        i = bisect_right(points, x) - 1
        if points[i] == x:
            values = self.anchors[i]
        else:
            # points[i] < x < points[i+1], so segment i has positive length.
            block = self.blocks[i]
            step = (x - points[i]) * block.slope
            values = tuple(
                v + step if block.covers(j + 1) else v
                for j, v in enumerate(self.anchors[i])
            )
        if scale != 1:
            values = tuple(scale * v for v in values)
        return values

    def partial_sum(self, k: int, q) -> Fraction:
        """P_1(q) + ... + P_k(q)."""
        if not 1 <= k <= self.n + 1:
            raise ValueError(f"partial sum order k={k} outside 1..{self.n + 1}")
        return sum(self.evaluate(q)[:k], Fraction(0))

    def rising_block_right_of(self, q) -> RisingBlock:
        """The block governing the segment immediately right of q.

        For dilation systems the query wraps, so the block right of the last
        point is the block right of the first.  Component indices are
        unaffected by dilation.
        """
        x, _ = self._reduce(Fraction(q))
        points = self.division_points
        if x == self.q_end:
            if not self.is_dilation:
                raise DomainError("no segment right of the final point")
            x = self.q_start
        i = bisect_right(points, x) - 1
        while points[i + 1] == points[i]:
            i += 1
        return self.blocks[i]

    # -- division point structure -------------------------------------------

    def point_groups(self) -> tuple[PointGroup, ...]:
        """Distinct parameter values with their anchors and classification."""
        points = self.division_points
        grouped: list[list[int]] = []
        for i in range(len(points)):
            if grouped and points[grouped[-1][0]] == points[i]:
                grouped[-1].append(i)
            else:
                grouped.append([i])
        effective = self.effective_segments()
        out = []
        for indices in grouped:
            qg = points[indices[0]]
            left = None
            right = None
            for i, block in effective:
                if points[i] < qg:
                    left = block
                elif right is None:
                    right = block
            if left is None or right is None:
                if self.is_dilation and effective:
                    kind = _classify_pair(effective[-1][1], effective[0][1])
                else:
                    kind = DivisionPointKind.BOUNDARY
            else:
                kind = _classify_pair(left, right)
            out.append(PointGroup(qg, self.anchors[indices[0]], kind, tuple(indices)))
        return tuple(out)

    def classify_division_point(self, i: int) -> DivisionPointKind:
        if not 0 <= i < len(self.division_points):
            raise IndexError(f"division point index {i} out of range")
        for group in self.point_groups():
            if i in group.indices:
                return group.kind
        raise AssertionError("unreachable: every index belongs to a group")

    # -- validation ----------------------------------------------------------

    def validate(self) -> ValidationReport:
        """Check every defining condition; problems are reported, not thrown."""
        out: list[Violation] = []

        def add(code: str, where: str, detail: str) -> None:
            out.append(Violation(code, where, detail))

        points = self.division_points
        npts = len(points)
        if self.n < 1:
            add("shape", "n", f"need n >= 1, got {self.n}")
        if npts < 2:
            add("shape", "division_points", "need at least two division points")
        if len(self.anchors) != npts:
            add("shape", "anchors", f"{len(self.anchors)} anchors for {npts} points")
        if len(self.blocks) != max(npts - 1, 0):
            add(
                "shape",
                "blocks",
                f"{len(self.blocks)} blocks for {max(npts - 1, 0)} segments",
            )
        for i, anchor in enumerate(self.anchors):
            if len(anchor) != self.n + 1:
                add("shape", f"anchors[{i}]", f"expected {self.n + 1} components")
        if self.period_marks is not None:
            marks = self.period_marks
            if any(m2 <= m1 for m1, m2 in zip(marks, marks[1:])):
                add("shape", "period_marks", "marks must strictly increase")
            if marks and (marks[0] < 0 or marks[-1] >= npts):
                add("shape", "period_marks", "marks out of range")
        if out:
            return ValidationReport(tuple(out))

        if points[0] <= 0:
            add("positivity", "division_points[0]", "domain must start after 0")
        for i in range(npts - 1):
            if points[i + 1] < points[i]:
                add(
                    "monotone-points",
                    f"division_points[{i + 1}]",
                    f"{format_fraction(points[i + 1])} precedes "
                    f"{format_fraction(points[i])}",
                )
        if points[-1] <= points[0]:
            add("shape", "division_points", "domain has zero total length")
            return ValidationReport(tuple(out))

        for i, anchor in enumerate(self.anchors):
            if anchor[0] < 0:
                add("ordering", f"anchors[{i}]", "first component is negative")
            for j in range(self.n):
                if anchor[j] > anchor[j + 1]:
                    add(
                        "ordering",
                        f"anchors[{i}]",
                        f"components {j + 1} and {j + 2} out of order",
                    )
            total = sum(anchor, Fraction(0))
            if total != points[i]:
                add(
                    "sum",
                    f"anchors[{i}]",
                    f"components sum to {format_fraction(total)}, expected "
                    f"{format_fraction(points[i])}",
                )

        for i, block in enumerate(self.blocks):
            if block.hi > self.n + 1:
                add("block-range", f"blocks[{i}]", f"block top {block.hi} exceeds n+1")

        # Linearity fixes each segment from its left anchor, so checking the
        # right anchor checks every interior point of the segment too.
        for i, block in enumerate(self.blocks):
            dq = points[i + 1] - points[i]
            a0, a1 = self.anchors[i], self.anchors[i + 1]
            where = f"segment[{i}]"
            if dq == 0:
                if a0 != a1:
                    add("segment-consistency", where, "zero length but anchors differ")
                continue
            if block.hi > self.n + 1:
                continue
            lo, hi = block.lo - 1, block.hi - 1
            rise = dq * block.slope
            for j in range(self.n + 1):
                expected = a0[j] + rise if lo <= j <= hi else a0[j]
                if a1[j] != expected:
                    add(
                        "segment-consistency",
                        where,
                        f"component {j + 1} ends at {format_fraction(a1[j])}, "
                        f"expected {format_fraction(expected)}",
                    )
                    break
            if any(a0[j] != a0[lo] for j in range(lo, hi + 1)):
                add("block-coincidence", where, "rising components do not coincide")

        effective = self.effective_segments()
        for (_, left), (i_right, right) in zip(effective, effective[1:]):
            qg = points[i_right]
            anchor = self.anchors[i_right]
            if left.as_pair() == right.as_pair():
                continue
            r_low, s_high = left.lo, right.hi
            if r_low < s_high:
                run = anchor[r_low - 1 : s_high]
                if any(v != run[0] for v in run):
                    add(
                        "division-coincidence",
                        f"q={format_fraction(qg)}",
                        f"components {r_low}..{s_high} must coincide here",
                    )

        if self.is_dilation:
            factor = self.extension.factor
            if points[-1] != factor * points[0]:
                add(
                    "dilation-consistency",
                    "division_points",
                    f"last point {format_fraction(points[-1])} is not factor "
                    f"times first point {format_fraction(points[0])}",
                )
            scaled = tuple(factor * v for v in self.anchors[0])
            if self.anchors[-1] != scaled:
                add(
                    "dilation-consistency",
                    "anchors",
                    "last anchor is not the scaled first anchor",
                )
            if effective and not out:
                left = effective[-1][1]
                right = effective[0][1]
                if (
                    left.as_pair() != right.as_pair()
                    and left.lo < right.hi
                ):
                    run = self.anchors[-1][left.lo - 1 : right.hi]
                    if any(v != run[0] for v in run):
                        add(
                            "division-coincidence",
                            f"q={format_fraction(points[-1])} (wrap)",
                            f"components {left.lo}..{right.hi} must coincide "
                            "across the dilation seam",
                        )

        return ValidationReport(tuple(out))

    # -- derived systems ------------------------------------------------------

    def unroll(self, periods: int) -> "PLSystem":
        """Write out a dilation system explicitly over the given period count.

        The result has no extension and carries period marks at the copy
        boundaries, which makes it directly usable for sampled estimation.
        """
        if not self.is_dilation:
            raise ValueError("only dilation systems unroll")
        if periods < 1:
            raise ValueError("periods must be at least 1")
        factor = self.extension.factor
        seg_count = len(self.division_points) - 1
        points: list[Fraction] = list(self.division_points)
        anchors: list[tuple[Fraction, ...]] = list(self.anchors)
        blocks: list[RisingBlock] = list(self.blocks)
        scale = Fraction(1)
        for _ in range(1, periods):
            scale *= factor
            # The first point of each later copy equals the previous end.
            points.extend(scale * q for q in self.division_points[1:])
            anchors.extend(
                tuple(scale * v for v in a) for a in self.anchors[1:]
            )
            blocks.extend(self.blocks)
        marks = tuple(m * seg_count for m in range(periods + 1))
        return PLSystem(
            n=self.n,
            division_points=tuple(points),
            anchors=tuple(anchors),
            blocks=tuple(blocks),
            extension=NO_EXTENSION,
            period_marks=marks,
        )

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        if self.is_dilation:
            extension = {
                "type": "dilation",
                "factor": format_fraction(self.extension.factor),
            }
        else:
            extension = {"type": "none"}
        doc = {
            "schema": 1,
            "n": self.n,
            "division_points": [format_fraction(q) for q in self.division_points],
            "anchors": [
                [format_fraction(v) for v in anchor] for anchor in self.anchors
            ],
            "blocks": [[b.lo, b.hi] for b in self.blocks],
            "extension": extension,
        }
        if self.period_marks is not None:
            doc["period_marks"] = list(self.period_marks)
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PLSystem":
        try:
            ext_doc = doc.get("extension", {"type": "none"})
            if ext_doc.get("type") == "dilation":
                extension = Extension.dilation(parse_fraction(ext_doc["factor"]))
            else:
                extension = NO_EXTENSION
            marks = doc.get("period_marks")
            return cls(
                n=int(doc["n"]),
                division_points=tuple(
                    parse_fraction(s) for s in doc["division_points"]
                ),
                anchors=tuple(
                    tuple(parse_fraction(s) for s in row) for row in doc["anchors"]
                ),
                blocks=tuple(
                    RisingBlock(int(lo), int(hi)) for lo, hi in doc["blocks"]
                ),
                extension=extension,
                period_marks=tuple(marks) if marks is not None else None,
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed system document: {exc}") from exc
