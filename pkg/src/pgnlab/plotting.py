"""Rendering of systems to figures and plot-ready delimited files.

The combined graph of a system is fully determined by its division point
anchors, so each component is drawn as the polyline through them.  Division
points are marked with vertical rules, switch points visually distinct from
ordinary ones, and boundary points from both.
"""

from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .systems import DivisionPointKind, PLSystem

__all__ = [
    "component_polylines",
    "write_polyline_csv",
    "render_figure",
]

_KIND_STYLE = {
    DivisionPointKind.ORDINARY: {"color": "#8899aa", "linestyle": ":", "linewidth": 0.9},
    DivisionPointKind.SWITCH: {"color": "#cc3344", "linestyle": "--", "linewidth": 1.2},
    DivisionPointKind.BOUNDARY: {"color": "#444444", "linestyle": "-", "linewidth": 0.8},
}


def _drawn(system: PLSystem, periods: int) -> PLSystem:
    if periods < 1:
        raise ValueError("periods must be at least 1")
    if system.is_dilation and periods > 1:
        return system.unroll(periods)
    return system


def component_polylines(system: PLSystem, periods: int = 1):
    """Vertex lists (q, value) per component, floats, ready to draw."""
    drawn = _drawn(system, periods)
    groups = drawn.point_groups()
    return [
        [(float(g.q), float(g.anchor[j])) for g in groups]
        for j in range(system.n + 1)
    ]


def write_polyline_csv(path, system: PLSystem, periods: int = 1) -> int:
    """Float vertex table, one row per distinct division point."""
    drawn = _drawn(system, periods)
    groups = drawn.point_groups()
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["q", "kind"] + [f"P_{d}" for d in range(1, system.n + 2)]
        )
        for g in groups:
            writer.writerow(
                [float(g.q), g.kind.value] + [float(v) for v in g.anchor]
            )
    return len(groups)


def render_figure(
    path,
    system: PLSystem,
    periods: int = 1,
    title: str = None,
    fmt: str = None,
):
    """Line rendering of all components with division points marked.

    ``fmt`` overrides the format matplotlib would infer from the file
    suffix, which matters when writing through a temporary name.
    """
    polylines = component_polylines(system, periods)
    drawn = _drawn(system, periods)
    groups = drawn.point_groups()
    fig, ax = plt.subplots(figsize=(7.5, 4.5))
    try:
        seen_kinds = []
        for g in groups:
            style = _KIND_STYLE[g.kind]
            label = None
            if g.kind not in seen_kinds:
                seen_kinds.append(g.kind)
                label = g.kind.value
            ax.axvline(float(g.q), label=label, **style)
        for j, line in enumerate(polylines, start=1):
            xs = [p[0] for p in line]
            ys = [p[1] for p in line]
            ax.plot(xs, ys, linewidth=1.6, label=f"P_{j}")
        ax.set_xlabel("q")
        ax.set_ylabel("components")
        if title:
            ax.set_title(title)
        ax.legend(loc="upper left", fontsize=8, ncols=2)
        ax.grid(True, alpha=0.25)
        fig.tight_layout()
        fig.savefig(path, format=fmt)
    finally:
        plt.close(fig)
    return path
