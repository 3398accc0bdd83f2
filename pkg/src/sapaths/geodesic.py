"""Geodesics inside a simple polygon: ear-clipping triangulation, funnel
shortest paths, a shortest path tree, LCA queries, and inflection points.

The funnel route is deliberately different from the visibility-graph Dijkstra
used as a test oracle, so the two can check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .geom import (COLLINEAR, LEFT, OUTSIDE, RIGHT, GeometryError, Point,
                   Polygon, orientation, point_in_polygon,
                   point_on_segment, segments_properly_intersect)

ROOT = -1  # tree key for the root point


class GeodesicError(ValueError):
    pass


class EndpointOutside(GeodesicError):
    pass


class NodeNotInTree(GeodesicError):
    pass


# -- triangulation ---------------------------------------------------------

def triangulate(P: Polygon) -> list[tuple[int, int, int]]:
    """Ear clipping; CCW polygon, returns triangles as vertex index triples."""
    n = P.n
    verts = P.vertices
    idx = list(range(n))
    tris: list[tuple[int, int, int]] = []

    def is_ear(i_pos: int) -> bool:
        a = verts[idx[i_pos - 1]]
        b = verts[idx[i_pos]]
        c = verts[idx[(i_pos + 1) % len(idx)]]
        if orientation(a, b, c) != LEFT:
            return False
        for j in idx:
            if j in (idx[i_pos - 1], idx[i_pos], idx[(i_pos + 1) % len(idx)]):
                continue
            p = verts[j]
            if (orientation(a, b, p) != RIGHT and orientation(b, c, p) != RIGHT
                    and orientation(c, a, p) != RIGHT):
                return False
        return True

    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 10 * n * n:
            raise GeodesicError("ear clipping failed to make progress")
        for i_pos in range(len(idx)):
            if is_ear(i_pos):
                tris.append((idx[i_pos - 1], idx[i_pos], idx[(i_pos + 1) % len(idx)]))
                idx.pop(i_pos)
                break
        else:
            raise GeodesicError("no ear found (degenerate polygon?)")
    tris.append(tuple(idx))
    return tris


def _point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool:
    return (orientation(a, b, p) != RIGHT and orientation(b, c, p) != RIGHT
            and orientation(c, a, p) != RIGHT)


def _locate(P: Polygon, tris, p: Point) -> int:
    for ti, (i, j, k) in enumerate(tris):
        if _point_in_triangle(p, P.vertices[i], P.vertices[j], P.vertices[k]):
            return ti
    raise EndpointOutside(f"point {p} not inside the polygon")


def _dual_adjacency(tris) -> dict[int, list[tuple[int, tuple[int, int]]]]:
    """Triangle adjacency through shared diagonals/edges."""
    edge_owner: dict[tuple[int, int], int] = {}
    adj: dict[int, list[tuple[int, tuple[int, int]]]] = {t: [] for t in range(len(tris))}
    for ti, tri in enumerate(tris):
        for e in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (min(e), max(e))
            if key in edge_owner:
                tj = edge_owner[key]
                adj[ti].append((tj, key))
                adj[tj].append((ti, key))
            else:
                edge_owner[key] = ti
    return adj


def _tri_path(adj, start: int, goal: int) -> list[tuple[int, tuple[int, int]]]:
    """BFS in the dual; returns [(triangle, portal-to-enter-it), ...]."""
    if start == goal:
        return []
    prev: dict[int, tuple[int, tuple[int, int]]] = {start: (start, None)}
    queue = [start]
    while queue:
        cur = queue.pop(0)
        if cur == goal:
            break
        for nxt, portal in adj[cur]:
            if nxt not in prev:
                prev[nxt] = (cur, portal)
                queue.append(nxt)
    if goal not in prev:
        raise GeodesicError("triangulation dual is disconnected")
    out = []
    cur = goal
    while cur != start:
        par, portal = prev[cur]
        out.append((cur, portal))
        cur = par
    out.reverse()
    return out


def _triarea2(a: Point, b: Point, c: Point) -> float:
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def _funnel(portals: list[tuple[Point, Point]]) -> list[Point]:
    """Simple stupid funnel over (left, right) portals; first and last portal
    are degenerate (the endpoints)."""
    path = [portals[0][0]]
    apex, left, right = portals[0][0], portals[0][0], portals[0][1]
    apex_i = left_i = right_i = 0
    i = 1
    while i < len(portals):
        pl, pr = portals[i]
        # Tighten the right side: pr must not open the funnel.
        if _triarea2(apex, right, pr) >= -1e-15:
            if apex.dist(right) < 1e-15 or _triarea2(apex, left, pr) <= 1e-15:
                right, right_i = pr, i
            else:
                # pr crossed over the left edge: left becomes the new apex.
                if path[-1].dist(left) > 1e-15:
                    path.append(left)
                apex, apex_i = left, left_i
                left, right = apex, apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        # Tighten the left side symmetrically.
        if _triarea2(apex, left, pl) <= 1e-15:
            if apex.dist(left) < 1e-15 or _triarea2(apex, right, pl) >= -1e-15:
                left, left_i = pl, i
            else:
                if path[-1].dist(right) > 1e-15:
                    path.append(right)
                apex, apex_i = right, right_i
                left, right = apex, apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        i += 1
    goal = portals[-1][0]
    if path[-1].dist(goal) > 1e-15:
        path.append(goal)
    return path


@dataclass
class _Tri:
    polygon: Polygon
    tris: list[tuple[int, int, int]]
    adj: dict


_tri_cache: dict[int, _Tri] = {}


def _triangulation(P: Polygon) -> _Tri:
    key = id(P)
    t = _tri_cache.get(key)
    if t is None or t.polygon is not P:
        tris = triangulate(P)
        t = _Tri(P, tris, _dual_adjacency(tris))
        _tri_cache.clear()
        _tri_cache[key] = t
    return t


@dataclass(frozen=True)
class GeodesicPath:
    """Taut polyline s = v_0, ..., v_m = t; interior points are polygon
    vertices."""
    points: tuple[Point, ...]

    def length(self) -> float:
        return sum(a.dist(b) for a, b in zip(self.points[:-1], self.points[1:]))


def geodesic(P: Polygon, s: Point, t: Point) -> GeodesicPath:
    """Shortest path between two points inside (or on) a simple polygon."""
    if point_in_polygon(P, s) == OUTSIDE:
        raise EndpointOutside(f"source {s} outside")
    if point_in_polygon(P, t) == OUTSIDE:
        raise EndpointOutside(f"target {t} outside")
    if s.dist(t) == 0.0:
        return GeodesicPath((s,))
    T = _triangulation(P)
    ts_ = _locate(P, T.tris, s)
    tt_ = _locate(P, T.tris, t)
    steps = _tri_path(T.adj, ts_, tt_)
    portals: list[tuple[Point, Point]] = [(s, s)]
    cur = ts_
    for tri_next, (u, v) in steps:
        # Order the portal: 'left' is left of the crossing direction.
        third = [w for w in T.tris[cur] if w not in (u, v)][0]
        w = P.vertices[third]
        pu, pv = P.vertices[u], P.vertices[v]
        mid = Point(0.5 * (pu.x + pv.x), 0.5 * (pu.y + pv.y))
        if _triarea2(w, mid, pu) > 0:
            portals.append((pu, pv))
        else:
            portals.append((pv, pu))
        cur = tri_next
    portals.append((t, t))
    pts = _funnel(portals)
    # Drop collinear interior points introduced by portal endpoints.
    cleaned = [pts[0]]
    for p in pts[1:-1]:
        if cleaned and p.dist(cleaned[-1]) < 1e-13:
            continue
        cleaned.append(p)
    if pts[-1].dist(cleaned[-1]) > 1e-13:
        cleaned.append(pts[-1])
    out = [cleaned[0]]
    for a, b, c in zip(cleaned[:-2], cleaned[1:-1], cleaned[2:]):
        if orientation(a, b, c, 1e-12) != COLLINEAR or (b - a).dot(c - b) < 0:
            out.append(b)
    if len(cleaned) > 1:
        out.append(cleaned[-1])
    return GeodesicPath(tuple(out))


@dataclass
class ShortestPathTree:
    """Geodesic tree from a root point to every polygon vertex."""

    polygon: Polygon
    root: Point
    parent: dict[int, int]        # vertex index -> parent vertex index or ROOT
    dist: dict[int, float]

    def root_path(self, v: int) -> list[int]:
        """Vertex indices from the root (exclusive) down to v (inclusive)."""
        if v == ROOT:
            return []
        if v not in self.parent:
            raise NodeNotInTree(f"vertex {v}")
        chain = []
        cur = v
        while cur != ROOT:
            chain.append(cur)
            cur = self.parent[cur]
        chain.reverse()
        return chain

    def path_points(self, v: int) -> list[Point]:
        return [self.root, *(self.polygon.vertices[i] for i in self.root_path(v))]


def build_spt(P: Polygon, root: Point) -> ShortestPathTree:
    if point_in_polygon(P, root) == OUTSIDE:
        raise EndpointOutside(f"root {root} outside")
    parent: dict[int, int] = {}
    dist: dict[int, float] = {}
    vindex = {v.as_tuple(): i for i, v in enumerate(P.vertices)}
    for i, v in enumerate(P.vertices):
        if root.dist(v) == 0.0:
            parent[i] = ROOT
            dist[i] = 0.0
            continue
        g = geodesic(P, root, v)
        pts = g.points
        if len(pts) == 1:
            parent[i] = ROOT
            dist[i] = 0.0
        elif len(pts) == 2:
            parent[i] = ROOT
            dist[i] = g.length()
        else:
            prev = pts[-2]
            j = vindex.get(prev.as_tuple())
            if j is None:
                # Snap: the funnel should only bend at vertices.
                j = min(range(P.n), key=lambda q: P.vertices[q].dist(prev))
            parent[i] = j
            dist[i] = g.length()
    return ShortestPathTree(P, root, parent, dist)


def lca(spt: ShortestPathTree, u: int, v: int) -> int:
    """Deepest common ancestor of two vertices; ROOT if the paths split at
    the root."""
    pu = [ROOT, *spt.root_path(u)]
    pv = [ROOT, *spt.root_path(v)]
    anc = ROOT
    for a, b in zip(pu, pv):
        if a == b:
            anc = a
        else:
            break
    return anc


def turn_signs(points: Sequence[Point]) -> list[int]:
    """Orientation sign at each interior vertex of a polyline."""
    return [orientation(a, b, c)
            for a, b, c in zip(points[:-2], points[1:-1], points[2:])]


def inflection_points(g: GeodesicPath) -> list[Point]:
    """Last vertex of each maximal same-turn subchain that is followed by a
    subchain turning the other way."""
    pts = g.points
    if len(pts) < 4:
        return []
    signs = turn_signs(pts)
    nz = [(i, s) for i, s in enumerate(signs) if s != 0]
    out = []
    for (i, s), (j, s2) in zip(nz[:-1], nz[1:]):
        if s != s2:
            out.append(pts[i + 1])
    return out


def visible(P: Polygon, a: Point, b: Point, eps: float = 1e-9) -> bool:
    """True if segment ab stays inside the (closed) polygon."""
    if a.dist(b) < eps:
        return True
    for _, u, v in P.edges():
        if segments_properly_intersect(a, b, u, v):
            return False
    # Collect boundary touch parameters and test midpoints of the gaps.
    ts = [0.0, 1.0]
    ab = b - a
    L2 = ab.dot(ab)
    for w in P.vertices:
        if point_on_segment(w, a, b, eps):
            ts.append(max(0.0, min(1.0, (w - a).dot(ab) / L2)))
    ts.sort()
    for t0, t1 in zip(ts[:-1], ts[1:]):
        if t1 - t0 < 1e-12:
            continue
        tm = 0.5 * (t0 + t1)
        m = Point(a.x + tm * ab.dx, a.y + tm * ab.dy)
        if point_in_polygon(P, m) == OUTSIDE:
            return False
    return True
