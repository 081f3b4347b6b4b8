"""Minimal SVG line charts for per-depth metric series.

Written by hand rather than through a plotting library so that rerunning
an evaluation produces byte-identical images; every coordinate is
formatted with fixed precision and nothing depends on wall-clock state.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH = 640
HEIGHT = 420
LEFT, RIGHT, TOP, BOTTOM = 62, 620, 34, 372

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)

Series = tuple[str, list[tuple[float, float]]]


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _tick_label(value: float) -> str:
    text = f"{value:.3f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-0") else "0"


def line_chart(title: str, x_label: str, y_label: str, series: list[Series]) -> str:
    points = [p for _, pts in series for p in pts]
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{(LEFT + RIGHT) // 2}" y="20" text-anchor="middle" font-size="14">'
        f"{escape(title)}</text>",
    ]
    if points:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        x_min, x_max = min(xs), max(xs)
        y_min, y_max = min(ys), max(ys)
        if x_min == x_max:
            x_min, x_max = x_min - 1.0, x_max + 1.0
        pad = (y_max - y_min) * 0.08
        if pad == 0.0:
            pad = max(abs(y_max) * 0.1, 0.1)
        y_min, y_max = y_min - pad, y_max + pad

        def sx(x: float) -> float:
            return LEFT + (x - x_min) / (x_max - x_min) * (RIGHT - LEFT)

        def sy(y: float) -> float:
            return BOTTOM - (y - y_min) / (y_max - y_min) * (BOTTOM - TOP)

        # y grid: six evenly spaced ticks
        for i in range(6):
            y = y_min + (y_max - y_min) * i / 5
            yy = _fmt(sy(y))
            parts.append(
                f'<line x1="{LEFT}" y1="{yy}" x2="{RIGHT}" y2="{yy}" '
                'stroke="#dddddd" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{LEFT - 6}" y="{yy}" text-anchor="end" '
                f'dominant-baseline="middle" font-size="11">{_tick_label(y)}</text>'
            )
        # x ticks at integers when they fit, else thinned
        first = math.ceil(x_min)
        last = math.floor(x_max)
        step = max(1, (last - first) // 12 + (1 if (last - first) % 12 else 0))
        tick = first
        while tick <= last:
            xx = _fmt(sx(tick))
            parts.append(
                f'<line x1="{xx}" y1="{BOTTOM}" x2="{xx}" y2="{BOTTOM + 4}" '
                'stroke="black" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{xx}" y="{BOTTOM + 18}" text-anchor="middle" font-size="11">'
                f"{tick}</text>"
            )
            tick += step
        for index, (name, pts) in enumerate(series):
            colour = PALETTE[index % len(PALETTE)]
            if pts:
                path = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in pts)
                parts.append(
                    f'<polyline points="{path}" fill="none" stroke="{colour}" '
                    'stroke-width="2"/>'
                )
                for x, y in pts:
                    parts.append(
                        f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="3" '
                        f'fill="{colour}"/>'
                    )
            ly = TOP + 14 + index * 16
            parts.append(
                f'<rect x="{RIGHT - 130}" y="{ly - 9}" width="10" height="10" '
                f'fill="{colour}"/>'
            )
            parts.append(
                f'<text x="{RIGHT - 115}" y="{ly}" font-size="11">{escape(name)}</text>'
            )
    parts.append(
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{BOTTOM}" stroke="black" '
        'stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{LEFT}" y1="{BOTTOM}" x2="{RIGHT}" y2="{BOTTOM}" stroke="black" '
        'stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{(LEFT + RIGHT) // 2}" y="{HEIGHT - 8}" text-anchor="middle" '
        f'font-size="12">{escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="16" y="{(TOP + BOTTOM) // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {(TOP + BOTTOM) // 2})">{escape(y_label)}</text>'
    )
    parts.append("</svg>\n")
    return "\n".join(parts)
