"""Planar primitives: points, directions, rays, simple polygons, and the
predicates everything else is built on.

All predicates share a single tolerance ``EPS_GEOM`` (overridable through the
``SA_GEOM_TOL`` environment variable).  Robust exact predicates could replace
the epsilon tests without touching any caller.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

EPS_GEOM = float(os.environ.get("SA_GEOM_TOL", "1e-9"))


def set_geometry_tolerance(value: float) -> None:
    """Override the shared predicate tolerance (a CLI flag beats the
    SA_GEOM_TOL environment variable, which beats the 1e-9 default)."""
    global EPS_GEOM
    if not (value > 0 and math.isfinite(value)):
        raise GeometryError(f"tolerance must be a positive float, got {value}")
    EPS_GEOM = value

LEFT = 1
COLLINEAR = 0
RIGHT = -1

INSIDE = 1
BOUNDARY = 0
OUTSIDE = -1


class GeometryError(ValueError):
    pass


class SelfIntersecting(GeometryError):
    pass


class TooFewVertices(GeometryError):
    pass


class ZeroArea(GeometryError):
    pass


class OriginOutside(GeometryError):
    pass


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def __add__(self, d: "Direction") -> "Point":
        return Point(self.x + d.dx, self.y + d.dy)

    def __sub__(self, other: "Point") -> "Direction":
        return Direction(self.x - other.x, self.y - other.y)

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Direction:
    dx: float
    dy: float

    def norm(self) -> float:
        return math.hypot(self.dx, self.dy)

    def unit(self) -> "Direction":
        n = self.norm()
        if n == 0.0:
            raise GeometryError("cannot normalize zero direction")
        return Direction(self.dx / n, self.dy / n)

    def dot(self, other: "Direction") -> float:
        return self.dx * other.dx + self.dy * other.dy

    def cross(self, other: "Direction") -> float:
        return self.dx * other.dy - self.dy * other.dx

    def scaled(self, s: float) -> "Direction":
        return Direction(self.dx * s, self.dy * s)

    def perp_left(self) -> "Direction":
        return Direction(-self.dy, self.dx)

    def angle(self) -> float:
        return math.atan2(self.dy, self.dx)

    def __neg__(self) -> "Direction":
        return Direction(-self.dx, -self.dy)

    def __add__(self, other: "Direction") -> "Direction":
        return Direction(self.dx + other.dx, self.dy + other.dy)


@dataclass(frozen=True)
class Ray:
    origin: Point
    dir: Direction

    def __post_init__(self):
        if self.dir.norm() == 0.0:
            raise GeometryError("ray with zero direction")

    def at(self, t: float) -> Point:
        return Point(self.origin.x + t * self.dir.dx, self.origin.y + t * self.dir.dy)


def pt(xy) -> Point:
    if isinstance(xy, Point):
        return xy
    return Point(float(xy[0]), float(xy[1]))


def orientation(a: Point, b: Point, c: Point, eps: float | None = None) -> int:
    """Sign of the cross product (b-a) x (c-a): LEFT, RIGHT or COLLINEAR.

    Collinearity is declared when the doubled triangle area falls within
    ``eps`` scaled by the magnitude of the operands.
    """
    if eps is None:
        eps = EPS_GEOM
    cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    scale = max(1.0, abs(b.x - a.x), abs(b.y - a.y), abs(c.x - a.x), abs(c.y - a.y))
    if abs(cross) <= eps * scale:
        return COLLINEAR
    return LEFT if cross > 0 else RIGHT


def signed_area(vertices: Sequence[Point]) -> float:
    area = 0.0
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        area += a.x * b.y - b.x * a.y
    return 0.5 * area


def segments_properly_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """True if the open segments cross (shared endpoints do not count)."""
    d1 = orientation(q1, q2, p1)
    d2 = orientation(q1, q2, p2)
    d3 = orientation(p1, p2, q1)
    d4 = orientation(p1, p2, q2)
    return d1 != d2 and d3 != d4 and 0 not in (d1, d2, d3, d4)


def segment_intersection(p1: Point, p2: Point, q1: Point, q2: Point):
    """Intersection point of two segments, or None.  Touching endpoints count."""
    r = p2 - p1
    s = q2 - q1
    denom = r.cross(s)
    qp = q1 - p1
    scale = max(1.0, r.norm() * s.norm())
    if abs(denom) <= EPS_GEOM * scale:
        return None
    t = qp.cross(s) / denom
    u = qp.cross(r) / denom
    tol = EPS_GEOM * 10
    if -tol <= t <= 1 + tol and -tol <= u <= 1 + tol:
        return Point(p1.x + t * r.dx, p1.y + t * r.dy)
    return None


def point_on_segment(p: Point, a: Point, b: Point, eps: float | None = None) -> bool:
    if eps is None:
        eps = EPS_GEOM
    ab = b - a
    L = ab.norm()
    if L == 0.0:
        return p.dist(a) <= eps
    ap = p - a
    t = ap.dot(ab) / (L * L)
    t = min(1.0, max(0.0, t))
    proj = Point(a.x + t * ab.dx, a.y + t * ab.dy)
    return p.dist(proj) <= eps * max(1.0, L)


@dataclass(frozen=True)
class Polygon:
    """Simple polygon with counter-clockwise vertex cycle.

    Construct through :func:`validate_polygon`; the raw constructor assumes
    an already-normalized vertex sequence.
    """

    vertices: tuple[Point, ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edge(self, i: int) -> tuple[Point, Point]:
        return self.vertices[i], self.vertices[(i + 1) % self.n]

    def edges(self):
        for i in range(self.n):
            yield i, *self.edge(i)

    def area(self) -> float:
        return signed_area(self.vertices)

    def bbox(self) -> tuple[float, float, float, float]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)


def validate_polygon(raw: Iterable, eps: float | None = None) -> Polygon:
    """Normalize a raw vertex sequence into a CCW simple Polygon.

    CW input is reversed; duplicate vertices and collinear runs are merged.
    Raises TooFewVertices, ZeroArea or SelfIntersecting.
    """
    if eps is None:
        eps = EPS_GEOM
    verts = [pt(v) for v in raw]
    if len(verts) < 3:
        raise TooFewVertices(f"{len(verts)} vertices")

    # Merge consecutive duplicates (cyclically).
    scale = max(max(abs(v.x), abs(v.y)) for v in verts) or 1.0
    dedup: list[Point] = []
    for v in verts:
        if not dedup or v.dist(dedup[-1]) > eps * scale:
            dedup.append(v)
    if len(dedup) > 1 and dedup[0].dist(dedup[-1]) <= eps * scale:
        dedup.pop()

    # Merge collinear runs (cyclically, iterate to a fixed point).
    changed = True
    while changed and len(dedup) >= 3:
        changed = False
        for i in range(len(dedup)):
            a = dedup[i - 1]
            b = dedup[i]
            c = dedup[(i + 1) % len(dedup)]
            if orientation(a, b, c, eps) == COLLINEAR:
                dedup.pop(i)
                changed = True
                break

    if len(dedup) < 3:
        raise TooFewVertices("fewer than 3 vertices after normalization")

    area = signed_area(dedup)
    if abs(area) <= eps * scale * scale:
        raise ZeroArea(f"area {area}")
    if area < 0:
        dedup.reverse()

    n = len(dedup)
    for i in range(n):
        a1, a2 = dedup[i], dedup[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            b1, b2 = dedup[j], dedup[(j + 1) % n]
            if segments_properly_intersect(a1, a2, b1, b2):
                raise SelfIntersecting(f"edges {i} and {j} cross")
            # Non-adjacent edges must not even touch.
            if (point_on_segment(b1, a1, a2, eps) or point_on_segment(b2, a1, a2, eps)
                    or point_on_segment(a1, b1, b2, eps) or point_on_segment(a2, b1, b2, eps)):
                raise SelfIntersecting(f"edges {i} and {j} touch")

    return Polygon(tuple(dedup))


def point_in_polygon(P: Polygon, q: Point, eps: float | None = None) -> int:
    """Even-odd classification with an epsilon boundary band."""
    if eps is None:
        eps = EPS_GEOM
    scale = 1.0
    for i, a, b in P.edges():
        scale = max(scale, abs(a.x), abs(a.y))
    for i, a, b in P.edges():
        if point_on_segment(q, a, b, eps * 10):
            return BOUNDARY
    inside = False
    x, y = q.x, q.y
    for i, a, b in P.edges():
        if (a.y > y) != (b.y > y):
            xi = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y)
            if x < xi:
                inside = not inside
    return INSIDE if inside else OUTSIDE


def ray_shoot(P: Polygon, r: Ray, eps: float | None = None,
              skip_near_origin: bool = True) -> tuple[Point, int]:
    """First boundary intersection along the ray and the index of the edge hit.

    Vertex hits are resolved deterministically to the lowest edge index among
    the edges containing the hit point.  The ray origin must be inside P or on
    its boundary with the direction pointing inward.
    """
    if eps is None:
        eps = EPS_GEOM
    if point_in_polygon(P, r.origin) == OUTSIDE:
        raise OriginOutside(f"ray origin {r.origin} outside polygon")
    d = r.dir.unit()
    best_t = math.inf
    best: tuple[Point, int] | None = None
    for i, a, b in P.edges():
        e = b - a
        denom = d.cross(e)
        ao = a - r.origin
        if abs(denom) <= eps:
            continue
        t = ao.cross(e) / denom
        u = ao.cross(d) / denom
        if u < -eps or u > 1 + eps:
            continue
        if t <= eps * 100 and skip_near_origin:
            # Origin sits on this edge; the interesting hit is further along.
            continue
        if t < -eps:
            continue
        if t < best_t - eps:
            best_t = t
            best = (Point(r.origin.x + t * d.dx, r.origin.y + t * d.dy), i)
        # Ties (vertex hits) keep the lowest edge index: first wins.
    if best is None:
        raise GeometryError("ray did not hit the boundary (degenerate input?)")
    return best


def convex_hull(points: Sequence[Point]) -> list[Point]:
    """Andrew's monotone chain; returns hull vertices in CCW order."""
    pts = sorted(set((p.x, p.y) for p in points))
    if len(pts) <= 2:
        return [Point(*p) for p in pts]

    def half(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while len(out) >= 2:
                ox, oy = out[-2]
                ax, ay = out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return [Point(*p) for p in lower[:-1] + upper[:-1]]
