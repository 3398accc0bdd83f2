"""Deterministic instance generators for experiments and tests.

Five families: convex (points on a circle), random (star-shaped; simplicity
guaranteed by sorting vertices around a kernel point rather than by space
partitioning), comb (the U-polygon family, never self-approaching), spiral
(a thin spiral barrier winding into a large room; forces winding paths and,
for deep windings, non-existence), hook (a square with a thin two-sided
spike; the minimal Case-2 instance).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from .geom import INSIDE, Point, Polygon, point_in_polygon, validate_polygon

DEFAULT_SEED = 0


class UnsupportedKind(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    name: str
    polygon: Polygon
    s: Optional[Point] = None
    t: Optional[Point] = None
    seed: Optional[int] = None


def _interior_point(P: Polygon, rng: random.Random) -> Point:
    x0, y0, x1, y1 = P.bbox()
    for _ in range(10000):
        p = Point(rng.uniform(x0, x1), rng.uniform(y0, y1))
        if point_in_polygon(P, p, eps=1e-6) == INSIDE:
            return p
    raise RuntimeError("could not sample an interior point")


def gen_convex(n: int, seed: int = DEFAULT_SEED) -> Instance:
    """n distinct points on a circle; always convex and simple."""
    if n < 3:
        raise ValueError("need n >= 3")
    rng = random.Random(f"convex-{n}-{seed}")
    angs = sorted(rng.uniform(0.0, 2 * math.pi) for _ in range(n))
    for i in range(1, n):
        angs[i] = max(angs[i], angs[i - 1] + 0.2 / n)
    if angs[-1] - angs[0] > 2 * math.pi - 0.2 / n:
        span = angs[-1] - angs[0]
        angs = [angs[0] + (a - angs[0]) * (2 * math.pi - 0.3 / n) / span
                for a in angs]
    r = rng.uniform(1.0, 5.0)
    P = validate_polygon([(r * math.cos(a), r * math.sin(a)) for a in angs])
    s = _interior_point(P, rng)
    t = _interior_point(P, rng)
    return Instance(f"convex-{n}-{seed}", P, s, t, seed)


def gen_random(n: int, seed: int = DEFAULT_SEED) -> Instance:
    """Star-shaped polygon: sorted angles around a kernel, random radii."""
    if n < 3:
        raise ValueError("need n >= 3")
    rng = random.Random(f"random-{n}-{seed}")
    for _ in range(100):
        angs = sorted(rng.uniform(0.0, 2 * math.pi) for _ in range(n))
        for i in range(1, n):
            angs[i] = max(angs[i], angs[i - 1] + 0.3 / n)
        if angs[-1] - angs[0] > 2 * math.pi - 0.3 / n:
            span = angs[-1] - angs[0]
            angs = [angs[0] + (a - angs[0]) * (2 * math.pi - 0.4 / n) / span
                    for a in angs]
        pts = [(r * math.cos(a), r * math.sin(a))
               for a in angs for r in [rng.uniform(1.0, 6.0)]]
        try:
            P = validate_polygon(pts)
        except Exception:
            continue
        if P.n >= 3:
            s = _interior_point(P, rng)
            t = _interior_point(P, rng)
            return Instance(f"random-{n}-{seed}", P, s, t, seed)
    raise RuntimeError("star-shaped generation failed")


def gen_comb(n: int, seed: int = DEFAULT_SEED) -> Instance:
    """U-polygon family: a box with m teeth hanging from the top edge.

    m=1 (n<=8) is exactly the unit-notch U-polygon; never self-approaching."""
    m = max(1, (n - 4) // 4)
    W = 2 * m + 1
    verts: list[tuple[float, float]] = [(0, 0), (W, 0), (W, 3)]
    for k in range(m - 1, -1, -1):
        verts += [(2 * k + 2, 3), (2 * k + 2, 1), (2 * k + 1, 1), (2 * k + 1, 3)]
    verts.append((0, 3))
    P = validate_polygon(verts)
    return Instance(f"comb-{n}-{seed}", P, Point(0.5, 2.0), Point(W - 0.5, 2.0),
                    seed)


def _miter_offsets(pts: list[tuple[float, float]], w: float):
    left: list[tuple[float, float]] = []
    right: list[tuple[float, float]] = []
    dirs = []
    for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
        L = math.hypot(x1 - x0, y1 - y0)
        dirs.append(((x1 - x0) / L, (y1 - y0) / L))
    for i, (x, y) in enumerate(pts):
        if i == 0:
            nx, ny = -dirs[0][1], dirs[0][0]
        elif i == len(pts) - 1:
            nx, ny = -dirs[-1][1], dirs[-1][0]
        else:
            ax, ay = -dirs[i - 1][1], dirs[i - 1][0]
            bx, by = -dirs[i][1], dirs[i][0]
            nx, ny = ax + bx, ay + by
            L = math.hypot(nx, ny)
            nx, ny = nx / L, ny / L
            # miter scaling, clamped for sharp turns
            d = max(0.3, abs(nx * bx + ny * by))
            nx, ny = nx / d, ny / d
        left.append((x + w * nx, y + w * ny))
        right.append((x - w * nx, y - w * ny))
    return left, right


def gen_spiral(n: int, seed: int = DEFAULT_SEED, laps: Optional[float] = None,
               room: float = 30.0, r_out: float = 8.0, decay: float = 0.18,
               wall: float = 0.02) -> Instance:
    """Thin spiral barrier attached to the right wall of a square room.

    The path from the far corner must wind along the barrier.  Shallow
    windings (laps around 1.2-1.6) admit self-approaching paths with involute
    pieces; deep windings (laps >= 2) cut the source off.  n controls the
    barrier vertex count."""
    if laps is None:
        laps = 2.4
    # 10 segments per lap is the resolution floor; below it the miter offsets
    # of consecutive windings cross each other.
    N = max(int(math.ceil(10 * laps)), (n - 9) // 2)
    r_in = r_out * decay ** laps
    angs = [2 * math.pi * laps * i / N for i in range(N + 1)]
    rads = [r_out + (r_in - r_out) * i / N for i in range(N + 1)]
    center = [(room, 0.0)] + [(r * math.cos(a), r * math.sin(a))
                              for a, r in zip(angs, rads)]
    left, right = _miter_offsets(center, wall)
    left[0] = (room, left[0][1])
    right[0] = (room, right[0][1])
    verts = ([(room, -room), (room, left[0][1])] + left[1:]
             + list(reversed(right[1:])) + [(room, right[0][1]),
                                            (room, room), (-room, room),
                                            (-room, -room)])
    P = validate_polygon(verts)
    t_ang = 2 * math.pi * laps + 0.6 * math.pi
    t = Point(0.4 * r_in * math.cos(t_ang), 0.4 * r_in * math.sin(t_ang))
    s = Point(0.75 * room, 0.75 * room)
    return Instance(f"spiral-{n}-{seed}", P, s, t, seed)


def gen_hook(n: int, seed: int = DEFAULT_SEED) -> Instance:
    """Square room with a thin spike from the top; the path from the left
    pocket wraps the spike tip with a circular arc.

    Extra vertices beyond the base 8 become shallow convex bumps on the
    bottom edge, so the family scales in n without changing the path shape."""
    base = [(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (2.2, 4.0), (2.2, 0.7),
            (2.0, 1.0), (2.0, 4.0), (0.0, 4.0)]
    extra = max(0, n - 8)
    if extra:
        bumps = []
        for k in range(1, extra + 1):
            x = 4.0 * k / (extra + 1)
            y = -0.2 * math.sin(math.pi * k / (extra + 1))
            bumps.append((x, y))
        base = [base[0]] + bumps + base[1:]
    P = validate_polygon(base)
    return Instance(f"hook-{n}-{seed}", P, Point(0.2, 1.2), Point(2.3, 3.5),
                    seed)


_KINDS = {
    "convex": gen_convex,
    "random": gen_random,
    "comb": gen_comb,
    "spiral": gen_spiral,
    "hook": gen_hook,
}


def generate(kind: str, n: int, seed: int = DEFAULT_SEED, **kwargs) -> Instance:
    if kind not in _KINDS:
        raise UnsupportedKind(f"unknown kind {kind!r}; choose from "
                              f"{sorted(_KINDS)}")
    return _KINDS[kind](n, seed, **kwargs)
