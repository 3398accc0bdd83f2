"""SVG rendering of polygons and paths.

Curved pieces are emitted as densely sampled polylines (never fewer than 8
samples per piece) so any SVG viewer shows the true geometry.  Colors encode
the piece kind: segments gray-blue, arcs (order 0) orange, involutes a
per-order ramp from red to purple.
"""

from __future__ import annotations

import math
from typing import Optional

from .geom import Point, Polygon
from .path import Curve, LineSeg, SAPath

MIN_SAMPLES = 8

SEG_COLOR = "#1a8a3c"                  # straight segments: green
ORDER_COLORS = ["#7030c0", "#d02020", "#e08020", "#b0209a", "#3040d0",
                "#208090"]             # order 0 (arcs): purple, then a ramp


def piece_color(piece) -> str:
    if isinstance(piece, LineSeg):
        return SEG_COLOR
    k = piece.piece.order
    return ORDER_COLORS[min(k, len(ORDER_COLORS) - 1)]


def _polyline(points, color: str, width: float, dash: Optional[str] = None
              ) -> str:
    pts = " ".join(f"{x:.6g},{y:.6g}" for x, y in points)
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{width:.4g}" stroke-linejoin="round"{extra}/>')


def _sample(piece, density: int) -> list[tuple[float, float]]:
    if isinstance(piece, LineSeg):
        n = max(2, MIN_SAMPLES)
    else:
        lo, hi = piece.piece.theta_range
        n = max(MIN_SAMPLES, density, int(32 * abs(hi - lo) / math.pi))
    return [(p[0], p[1]) for p in piece.samples(n)]


def render_svg(P: Polygon, path: Optional[SAPath] = None,
               s: Optional[Point] = None, t: Optional[Point] = None,
               width: int = 640, density: int = 64) -> str:
    """Standalone SVG document: polygon outline, optional path and markers."""
    x0, y0, x1, y1 = P.bbox()
    pad = 0.05 * max(x1 - x0, y1 - y0, 1e-9)
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    w, h = x1 - x0, y1 - y0
    height = int(round(width * h / w))
    stroke = 0.004 * max(w, h)

    # SVG y runs down; flip with a transform so the geometry reads upright.
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="{x0:.6g} {-y1:.6g} {w:.6g} {h:.6g}">',
        f'<g transform="scale(1,-1)">',
        _polyline([(v.x, v.y) for v in P.vertices] +
                  [(P.vertices[0].x, P.vertices[0].y)],
                  "#222222", stroke),
    ]
    if path is not None:
        for piece in path.pieces:
            parts.append(_polyline(_sample(piece, density),
                                   piece_color(piece), 1.6 * stroke))
        if s is None:
            s = path.source
        if t is None:
            t = path.target
    r = 2.5 * stroke
    if s is not None:
        parts.append(f'<circle cx="{s.x:.6g}" cy="{s.y:.6g}" r="{r:.4g}" '
                     f'fill="#2255cc"/>')
    if t is not None:
        parts.append(f'<circle cx="{t.x:.6g}" cy="{t.y:.6g}" r="{r:.4g}" '
                     f'fill="#c02020"/>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts)


def save_svg(filename: str, P: Polygon, path: Optional[SAPath] = None,
             s: Optional[Point] = None, t: Optional[Point] = None,
             width: int = 640, density: int = 64) -> None:
    with open(filename, "w") as f:
        f.write(render_svg(P, path, s, t, width, density) + "\n")
