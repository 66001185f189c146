"""Deterministic SVG line charts for trajectories.

No plotting dependency: charts are assembled as plain SVG text with a fixed
viewport, stable element ordering, fixed-precision coordinates and no
timestamps, so identical inputs yield byte-identical output.  The x axis is
labelled with calendar dates derived from the trajectories' epoch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .numerics import Trajectory

__all__ = ["ChartStyle", "emit_svg"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")

_WIDTH, _HEIGHT = 960, 540
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 80, 24, 48, 56


@dataclass(frozen=True)
class ChartStyle:
    """Axis and legend options.

    series selects what each trajectory contributes: its cumulative curve,
    its daily-incidence curve, or both.
    """

    title: str = ""
    y_label: str = "persons"
    series: str = "cumulative"  # "cumulative" | "daily" | "both"

    def __post_init__(self):
        if self.series not in ("cumulative", "daily", "both"):
            raise ValueError(f"series must be cumulative, daily or both, got {self.series!r}")


def _nice_ticks(low: float, high: float, target: int = 6) -> list[float]:
    if high <= low:
        return [low]
    raw = (high - low) / target
    magnitude = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * magnitude
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * magnitude:
            step = mult * magnitude
            break
    first = math.ceil(low / step) * step
    ticks = []
    value = first
    while value <= high + 1e-9 * step:
        ticks.append(0.0 if value == 0 else value)
        value += step
    return ticks


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _tick_label(value: float) -> str:
    return f"{value:g}"


def emit_svg(
    labeled_trajectories: Sequence[tuple[str, Trajectory]],
    style: ChartStyle = ChartStyle(),
) -> bytes:
    """Render labelled trajectories as one SVG document (UTF-8 bytes).

    All trajectories must share the same grid.  One polyline per plotted
    series, in input order; legend entries mirror the labels.
    """
    if not labeled_trajectories:
        raise ValueError("at least one labelled trajectory is required")
    reference = labeled_trajectories[0][1]
    for label, traj in labeled_trajectories[1:]:
        if not reference.same_grid(traj):
            raise ValueError(f"trajectory {label!r} is on a different grid")

    curves: list[tuple[str, np.ndarray]] = []
    for label, traj in labeled_trajectories:
        if style.series in ("cumulative", "both"):
            name = label if style.series == "cumulative" else f"{label} (cumulative)"
            curves.append((name, traj.cumulative))
        if style.series in ("daily", "both"):
            name = label if style.series == "daily" else f"{label} (daily)"
            curves.append((name, traj.daily))

    n = len(reference.cumulative)
    y_low = min(0.0, min(float(np.min(values)) for _, values in curves))
    y_high = max(float(np.max(values)) for _, values in curves)
    if y_high <= y_low:
        y_high = y_low + 1.0

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def x_px(day: float) -> float:
        if n == 1:
            return _MARGIN_LEFT + plot_w / 2.0
        return _MARGIN_LEFT + plot_w * day / (n - 1)

    def y_px(value: float) -> float:
        return _MARGIN_TOP + plot_h * (y_high - value) / (y_high - y_low)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>',
    ]
    if style.title:
        parts.append(
            f'<text x="{_WIDTH // 2}" y="24" text-anchor="middle" font-size="16">'
            f"{escape(style.title)}</text>"
        )

    # axes
    x0, x1 = _MARGIN_LEFT, _WIDTH - _MARGIN_RIGHT
    y0, y1 = _HEIGHT - _MARGIN_BOTTOM, _MARGIN_TOP
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="#444444"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="#444444"/>')

    for tick in _nice_ticks(y_low, y_high):
        py = y_px(tick)
        parts.append(
            f'<line x1="{x0 - 4}" y1="{_fmt(py)}" x2="{x1}" y2="{_fmt(py)}" '
            'stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{x0 - 8}" y="{_fmt(py + 4)}" text-anchor="end">'
            f"{_tick_label(tick)}</text>"
        )

    for tick in _nice_ticks(0.0, float(n - 1), target=7):
        if tick < 0 or tick > n - 1:
            continue
        px = x_px(tick)
        label = (reference.dates()[int(tick)]).isoformat()
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y0 + 4}" stroke="#444444"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{y0 + 18}" text-anchor="middle">{label}</text>'
        )

    parts.append(
        f'<text x="16" y="{_MARGIN_TOP - 10}" text-anchor="start">'
        f"{escape(style.y_label)}</text>"
    )

    for index, (name, values) in enumerate(curves):
        color = _PALETTE[index % len(_PALETTE)]
        points = " ".join(
            f"{_fmt(x_px(i))},{_fmt(y_px(float(v)))}" for i, v in enumerate(values)
        )
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
        )

    legend_x = x1 - 220
    for index, (name, _) in enumerate(curves):
        color = _PALETTE[index % len(_PALETTE)]
        ly = _MARGIN_TOP + 8 + 18 * index
        parts.append(
            f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 24}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{legend_x + 30}" y="{ly + 4}" text-anchor="start">{escape(name)}</text>'
        )

    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")
