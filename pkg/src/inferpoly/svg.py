"""Minimal SVG 1.1 rendering of lattice polygons."""

from __future__ import annotations

from typing import Optional, Sequence

from . import planar


def polygon_svg(vertices: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None, unit: int = 40) -> str:
    """Polygon outline with labelled vertices; y grows upwards as in the plane."""
    pts = [(int(p[0]), int(p[1])) for p in vertices]
    ring = planar.convex_hull(pts) if len(pts) > 2 else pts
    if labels is None:
        labels = [f"({x},{y})" for x, y in pts]
    label_of = dict(zip(pts, labels))
    xs = [x for x, _ in pts] or [0]
    ys = [y for _, y in pts] or [0]
    pad = unit
    width = (max(xs) - min(xs)) * unit + 2 * pad + 4 * unit
    height = (max(ys) - min(ys)) * unit + 2 * pad

    def sx(x):
        return (x - min(xs)) * unit + pad

    def sy(y):
        return (max(ys) - y) * unit + pad

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    path = " ".join(f"{sx(x)},{sy(y)}" for x, y in ring)
    if len(ring) >= 3:
        out.append(f'<polygon points="{path}" fill="#dde8f4" stroke="#1f4e79" stroke-width="2"/>')
    elif len(ring) == 2:
        out.append(f'<polyline points="{path}" fill="none" stroke="#1f4e79" stroke-width="2"/>')
    for x, y in ring:
        out.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="4" fill="#1f4e79"/>')
        out.append(
            f'<text x="{sx(x) + 6}" y="{sy(y) - 6}" font-family="monospace" font-size="12">'
            f"{_escape(label_of.get((x, y), ''))}</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
