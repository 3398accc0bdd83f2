"""Path data model (segments, arcs, involute pieces) plus verification of the
self-approaching property and metric queries.

Two verifiers are provided on purpose.  ``verify_triples`` is the brute-force
oracle straight from the definition (|ac| >= |bc| for ordered sample triples).
``verify_normal_property`` checks the equivalent normal/half-plane law: every
sample ahead of a point must lie in the closed half-plane in front of the
tangent there, including both one-sided tangents at bends.  Both are
sampling-based with an explicit tolerance; the pieces are transcendental, so
exact verification is not on the table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import involute as inv
from .geom import Direction, Point, Polygon, point_in_polygon, OUTSIDE

DEFAULT_SAMPLES_PER_PIECE = 64
DEFAULT_TOL = 1e-7
BEND_ANGLE_TOL = 1e-6  # radians; junctions turning less are G1, not bends


class PathError(ValueError):
    pass


class OutOfRange(PathError):
    pass


class DegenerateEndpoints(PathError):
    pass


@dataclass(frozen=True)
class LineSeg:
    a: Point
    b: Point

    def start(self) -> Point:
        return self.a

    def end(self) -> Point:
        return self.b

    def length(self) -> float:
        return self.a.dist(self.b)

    def point_at(self, s: float) -> Point:
        L = self.length()
        t = 0.0 if L == 0 else s / L
        return Point(self.a.x + t * (self.b.x - self.a.x),
                     self.a.y + t * (self.b.y - self.a.y))

    def tangent_at_start(self) -> Direction:
        return (self.b - self.a).unit()

    def tangent_at_end(self) -> Direction:
        return (self.b - self.a).unit()

    def samples(self, n: int) -> np.ndarray:
        t = np.linspace(0.0, 1.0, n)[:, None]
        p0 = np.array([self.a.x, self.a.y])
        p1 = np.array([self.b.x, self.b.y])
        return p0 + t * (p1 - p0)


@dataclass(frozen=True)
class Curve:
    """An involute piece traversed per its direction field; order 0 is an arc."""

    piece: inv.InvolutePiece

    def _t_start(self) -> float:
        lo, hi = self.piece.theta_range
        return lo if self.piece.direction > 0 else hi

    def _t_end(self) -> float:
        lo, hi = self.piece.theta_range
        return hi if self.piece.direction > 0 else lo

    def start(self) -> Point:
        return inv.evaluate(self.piece, self._t_start())

    def end(self) -> Point:
        return inv.evaluate(self.piece, self._t_end())

    def length(self) -> float:
        lo, hi = self.piece.theta_range
        return inv.arc_length(self.piece, lo, hi)

    def point_at(self, s: float) -> Point:
        """Arc-length parameterization via monotone bisection in theta."""
        t0, t1 = self._t_start(), self._t_end()
        lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
        total = inv.arc_length(self.piece, lo, hi)
        s = min(max(s, 0.0), total)
        a, b = t0, t1
        for _ in range(200):
            mid = 0.5 * (a + b)
            sm = inv.arc_length(self.piece, *sorted((t0, mid)))
            if abs(b - a) < 1e-14 * max(1.0, abs(a)):
                break
            if sm < s:
                a = mid
            else:
                b = mid
        return inv.evaluate(self.piece, 0.5 * (a + b))

    def tangent_at_start(self) -> Direction:
        return inv.tangent_direction(self.piece, self._t_start())

    def tangent_at_end(self) -> Direction:
        return inv.tangent_direction(self.piece, self._t_end())

    def samples(self, n: int) -> np.ndarray:
        ts = np.linspace(self._t_start(), self._t_end(), n)
        return inv.evaluate_many(self.piece, ts)


PathPiece = Union[LineSeg, Curve]


@dataclass(frozen=True)
class SAPath:
    """Oriented piecewise path from source to target (G0-continuous)."""

    pieces: tuple[PathPiece, ...]
    source: Point
    target: Point

    @staticmethod
    def from_points(points: Sequence[Point]) -> "SAPath":
        pts = list(points)
        if len(pts) < 2:
            return SAPath((), pts[0], pts[0]) if pts else SAPath((), Point(0, 0), Point(0, 0))
        segs = tuple(LineSeg(a, b) for a, b in zip(pts[:-1], pts[1:]) if a.dist(b) > 0)
        return SAPath(segs, pts[0], pts[-1])

    def validate(self, tol: float = 1e-8) -> None:
        if not self.pieces:
            if self.source.dist(self.target) > tol:
                raise PathError("empty path with distinct endpoints")
            return
        scale = max(1.0, abs(self.source.x), abs(self.source.y))
        if self.pieces[0].start().dist(self.source) > tol * scale:
            raise PathError("first piece does not start at the source")
        for p, q in zip(self.pieces[:-1], self.pieces[1:]):
            if p.end().dist(q.start()) > tol * scale:
                raise PathError(f"G0 continuity broken: {p.end()} vs {q.start()}")
        if self.pieces[-1].end().dist(self.target) > tol * scale:
            raise PathError("last piece does not end at the target")


def path_length(path: SAPath) -> float:
    return sum(p.length() for p in path.pieces)


def eval_path(path: SAPath, s_arc: float) -> Point:
    total = path_length(path)
    if s_arc < -1e-12 or s_arc > total + 1e-9 * max(1.0, total):
        raise OutOfRange(f"arc length {s_arc} outside [0, {total}]")
    if not path.pieces:
        return path.source
    s = min(max(s_arc, 0.0), total)
    for p in path.pieces:
        L = p.length()
        if s <= L:
            return p.point_at(s)
        s -= L
    return path.pieces[-1].end()


def detour_ratio(path: SAPath) -> float:
    d = path.source.dist(path.target)
    if d == 0.0:
        raise DegenerateEndpoints("source equals target")
    return path_length(path) / d


def bend_points(path: SAPath, angle_tol: float = BEND_ANGLE_TOL) -> list[Point]:
    """Piece junctions where the one-sided tangents differ by more than
    ``angle_tol`` radians."""
    out = []
    for p, q in zip(path.pieces[:-1], path.pieces[1:]):
        t1 = p.tangent_at_end()
        t2 = q.tangent_at_start()
        ang = abs(math.atan2(t1.cross(t2), t1.dot(t2)))
        if ang > angle_tol:
            out.append(p.end())
    return out


def sample_path(path: SAPath, samples_per_piece: int = DEFAULT_SAMPLES_PER_PIECE
                ) -> np.ndarray:
    """Ordered (N, 2) samples along the path, junctions included once."""
    if not path.pieces:
        return np.array([[path.source.x, path.source.y]])
    chunks = []
    for i, p in enumerate(path.pieces):
        s = p.samples(max(2, samples_per_piece))
        chunks.append(s if i == 0 else s[1:])
    return np.vstack(chunks)


@dataclass
class VerificationReport:
    passed: bool
    worst_margin: float
    n_samples: int
    check: str
    witness: Optional[dict] = None
    containment_ok: bool = True

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "n_samples": self.n_samples,
            "check": self.check,
            "witness": self.witness,
            "containment_ok": self.containment_ok,
        }


def verify_triples(path: SAPath, samples: int = 256,
                   tol: float = DEFAULT_TOL) -> VerificationReport:
    """Definition-level oracle: |ac| >= |bc| - tol for all ordered sample
    triples a < b < c along the path.

    Implemented as a prefix-minimum over the pairwise distance matrix, which
    covers all O(samples^3) triples.
    """
    if samples < 3:
        raise PathError("need at least 3 samples")
    per_piece = max(2, samples // max(1, len(path.pieces)))
    pts = sample_path(path, per_piece)
    n = len(pts)
    if n < 3:
        return VerificationReport(True, math.inf, n, "triples")
    diff = pts[:, None, :] - pts[None, :, :]
    D = np.hypot(diff[..., 0], diff[..., 1])
    # prefmin[j, k] = min_{i <= j} D[i, k]
    prefmin = np.minimum.accumulate(D, axis=0)
    jj, kk = np.triu_indices(n, k=1)
    keep = jj >= 1
    jj, kk = jj[keep], kk[keep]
    margins = prefmin[jj - 1, kk] - D[jj, kk]
    worst = float(margins.min()) if len(margins) else math.inf
    witness = None
    if worst < -tol:
        w = int(np.argmin(margins))
        j, k = int(jj[w]), int(kk[w])
        i = int(np.argmin(D[:j, k]))
        witness = {
            "a": tuple(pts[i]), "b": tuple(pts[j]), "c": tuple(pts[k]),
            "dist_ac": float(D[i, k]), "dist_bc": float(D[j, k]),
        }
    return VerificationReport(worst >= -tol, worst, n, "triples", witness)


def _sample_with_tangents(path: SAPath, samples_per_piece: int
                          ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample points, unit tangents, and cumulative ordering index.

    Junction points appear twice, once with each one-sided tangent, so the
    normal property is checked against both normals at a bend.
    """
    pts = []
    tans = []
    order = []
    idx = 0
    for p in path.pieces:
        n = max(2, samples_per_piece)
        if isinstance(p, LineSeg):
            P = p.samples(n)
            d = p.tangent_at_start()
            T = np.tile([d.dx, d.dy], (n, 1))
        else:
            ts = np.linspace(p._t_start(), p._t_end(), n)
            P = inv.evaluate_many(p.piece, ts)
            T = np.array([
                (lambda dd: [dd.dx, dd.dy])(inv.tangent_direction(p.piece, float(t)))
                for t in ts])
        pts.append(P)
        tans.append(T)
        order.extend(range(idx, idx + n))
        idx += n
    return np.vstack(pts), np.vstack(tans), np.array(order)


def verify_normal_property(path: SAPath, polygon: Optional[Polygon] = None,
                           samples_per_piece: int = DEFAULT_SAMPLES_PER_PIECE,
                           tol: float = DEFAULT_TOL) -> VerificationReport:
    """Half-plane check: every sample ahead of a point lies in front of the
    tangent there, (q - a) . d >= -tol.  With a polygon, samples must also
    stay inside it."""
    if samples_per_piece < 2:
        raise PathError("need at least 2 samples per piece")
    if not path.pieces:
        return VerificationReport(True, math.inf, 1, "normal")
    pts, tans, _ = _sample_with_tangents(path, samples_per_piece)
    n = len(pts)
    worst = math.inf
    witness = None
    for i in range(n - 1):
        ahead = pts[i + 1:] - pts[i]
        proj = ahead @ tans[i]
        m = float(proj.min())
        if m < worst:
            worst = m
            if m < -tol:
                j = i + 1 + int(np.argmin(proj))
                witness = {"a": tuple(pts[i]), "q": tuple(pts[j]),
                           "tangent": tuple(tans[i]), "margin": m}
    containment_ok = True
    if polygon is not None:
        scale = max(1.0, *(abs(v) for p in polygon.vertices for v in (p.x, p.y)))
        for p in pts:
            if point_in_polygon(polygon, Point(float(p[0]), float(p[1])),
                                eps=1e-7 * scale) == OUTSIDE:
                containment_ok = False
                if witness is None:
                    witness = {"outside": (float(p[0]), float(p[1]))}
                break
    passed = worst >= -tol and containment_ok
    return VerificationReport(passed, worst, n, "normal", witness, containment_ok)
