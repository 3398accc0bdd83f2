"""Independent oracles for the test suite.

Each oracle deliberately uses a different algorithm than the implementation
it checks: geodesics via a visibility-graph Dijkstra instead of the funnel,
arc lengths via adaptive quadrature instead of the polynomial antiderivative,
and witness separation via direct curve-boundary sampling.
"""

from __future__ import annotations

import heapq
import math
import random

import numpy as np
from scipy import integrate

from sapaths import involute as inv
from sapaths.geom import Point, Polygon, segments_properly_intersect
from sapaths.geodesic import visible


def dijkstra_geodesic_length(P: Polygon, s: Point, t: Point) -> float:
    """Shortest s-t path length through the visibility graph over polygon
    vertices (plus the endpoints)."""
    nodes = [s, t, *P.vertices]
    n = len(nodes)
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if visible(P, nodes[i], nodes[j]):
                d = nodes[i].dist(nodes[j])
                adj[i].append((j, d))
                adj[j].append((i, d))
    dist = [math.inf] * n
    dist[0] = 0.0
    heap = [(0.0, 0)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u] + 1e-15:
            continue
        if u == 1:
            return d
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v] - 1e-15:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return math.inf


def quad_arc_length(piece: inv.InvolutePiece, lo: float, hi: float) -> float:
    """Arc length by adaptive quadrature of the speed |a_k(t)|, split at the
    kinks of the absolute value."""
    knots = [lo, *inv.string_roots(piece, lo, hi), hi]
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        val, _ = integrate.quad(
            lambda t: abs(piece.a(piece.order, t)), a, b, limit=400)
        total += val
    return total


def random_piece(rng: random.Random, order: int,
                 theta_span: float = 3.0) -> inv.InvolutePiece:
    """A random well-conditioned involute piece of the given order."""
    lo = rng.uniform(-1.0, 1.0)
    return inv.InvolutePiece(
        order=order,
        r0=rng.uniform(0.5, 3.0),
        center=Point(rng.uniform(-5, 5), rng.uniform(-5, 5)),
        phase=rng.uniform(-math.pi, math.pi),
        reflect=rng.choice([1, -1]),
        coeffs=tuple(rng.uniform(-2.0, 2.0) for _ in range(order)),
        theta_range=(lo, lo + rng.uniform(0.5, theta_span)),
        direction=rng.choice([1, -1]),
    )


def witness_curve_crossing(witness: dict, tol: float = 1e-6) -> bool:
    """Re-verify a separation witness by sampling the recorded involute
    piece and intersecting the polyline with the boundary segment."""
    if witness.get("kind") != "separation":
        return False
    d = witness["chain_piece"]
    piece = inv.InvolutePiece(
        order=int(d["order"]), r0=float(d["r0"]),
        center=Point(*d["center"]), phase=float(d["phase"]),
        reflect=int(d["reflect"]), coeffs=tuple(d["coeffs"]),
        theta_range=tuple(d["theta"]), direction=int(d["dir"]))
    (ux, uy), (vx, vy) = witness["boundary_segment"]
    u, v = Point(ux, uy), Point(vx, vy)
    cx, cy = witness["crossing_point"]
    c = Point(cx, cy)
    lo, hi = piece.theta_range
    ts = np.linspace(lo, hi, 4096)
    xy = inv.evaluate_many(piece, ts)
    pts = [Point(float(x), float(y)) for x, y in xy]
    crossed = any(segments_properly_intersect(a, b, u, v)
                  for a, b in zip(pts[:-1], pts[1:]))
    near_curve = min(p.dist(c) for p in pts)
    scale = max(1.0, abs(c.x), abs(c.y))
    return crossed and near_curve < 1e-3 * scale


def random_simple_polygon(rng: random.Random, n: int) -> Polygon:
    """Random simple polygon by rejection over random point sets, falling
    back to a star-shaped arrangement (always succeeds)."""
    from sapaths.geom import validate_polygon

    for _ in range(50):
        pts = [(rng.uniform(0, 10), rng.uniform(0, 10)) for _ in range(n)]
        cx = sum(x for x, _ in pts) / n
        cy = sum(y for _, y in pts) / n
        pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
        try:
            return validate_polygon(pts)
        except ValueError:
            continue
    raise RuntimeError("polygon generation failed")
