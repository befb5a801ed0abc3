"""SVG output: one path per polygon, optional pressure colouring, vertex labels."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

from .geometry import Layout, polygon_rects

NEUTRAL = (225, 225, 225)
SHRINK = (60, 170, 75)  # pressure below 1: region larger than its weight
GROW = (215, 70, 60)  # pressure above 1: region smaller than its weight


def pressure_color(p: float, span: float = 1.0) -> str:
    """Neutral at pressure 1, greener the more a region must shrink, redder the more it must grow."""
    t = max(-1.0, min(1.0, math.log(p) / span)) if p > 0 else -1.0
    end = GROW if t > 0 else SHRINK
    a = abs(t)
    rgb = tuple(round(n + (e - n) * a) for n, e in zip(NEUTRAL, end))
    return "#%02x%02x%02x" % rgb


def _anchor(poly) -> tuple[float, float]:
    """Centre of the largest slab of the polygon, a point safely inside it."""
    r = max(polygon_rects(poly), key=lambda r: r.area)
    return float(r.x0 + r.x1) / 2, float(r.y0 + r.y1) / 2


def render_svg(layout: Layout, pressures: Sequence[float] | None = None, size: float = 600.0,
               labels: bool = True) -> str:
    b = layout.bbox
    W, H = float(b.x1 - b.x0), float(b.y1 - b.y0)
    s = size / max(W, H)
    x0, y1 = float(b.x0), float(b.y1)
    tx = lambda x: (float(x) - x0) * s  # noqa: E731
    ty = lambda y: (y1 - float(y)) * s  # noqa: E731
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W * s:.2f}" height="{H * s:.2f}" '
        f'viewBox="0 0 {W * s:.2f} {H * s:.2f}">'
    ]
    font = max(6.0, min(14.0, 0.3 * size / math.sqrt(max(layout.n, 1))))
    for v, poly in enumerate(layout.polygons):
        if not poly:
            continue
        fill = pressure_color(pressures[v]) if pressures is not None else "#f4f1e8"
        d = "M " + " L ".join(f"{tx(x):.3f} {ty(y):.3f}" for x, y in poly) + " Z"
        name = escape(layout.labels[v])
        out.append(f'<path id="v-{name}" d="{d}" fill="{fill}" stroke="#333" stroke-width="1"/>')
    if labels:
        for v, poly in enumerate(layout.polygons):
            if not poly:
                continue
            cx, cy = _anchor(poly)
            out.append(
                f'<text x="{tx(cx):.2f}" y="{ty(cy):.2f}" font-size="{font:.1f}" text-anchor="middle" '
                f'dominant-baseline="middle" font-family="sans-serif">{escape(layout.labels[v])}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
