"""Circle involutes of arbitrary order: evaluation, tangent geometry, arc
length, and the numerical solver for the anchor equations.

A piece of order k lives in a local frame (unit vectors ``u_r = (cos t, sin t)``
and ``u_t = (-sin t, cos t)``) and is the curve

    L_k(t) = A(t) u_r(t) - B(t) u_t(t),

where, writing c_0 = r0 and a_i(t) = sum_j c_j t^(i-j)/(i-j)!,

    A = a_0 - a_2 + a_4 - ...      (even indices up to k)
    B = a_1 - a_3 + a_5 - ...      (odd indices up to k)

Differentiating term by term gives |L_k'(t)| = |a_k(t)|, with the tangent
radial for odd k and tangential for even k.  |a_k| is simultaneously the
taut-string length, so the distance from the curve to its evolute (the
order-(k-1) piece with the same coefficients) is |a_k| as well.

A point anchor with local polar coordinates (r, phi) lies on the curve at
parameter t iff

    r cos(t - phi) = A(t)        and        r sin(t - phi) = B(t).

The unknown c_k enters exactly one of the two equations (B for odd k, A for
even k), so the other is a scalar root-finding problem in t and c_k follows
linearly.  For k = 1 this has the closed form

    t1 = phi +- arccos(r0/r),    c1 = (+-)sqrt(r^2 - r0^2) - r0*t1,

with the square-root sign matching the branch sign (sin(t1 - phi) carries the
branch sign into B).  Orders two and higher are solved by a bracketed damped
Newton iteration with bisection fallback.

The world mapping is w = center + Rot(phase) @ diag(1, reflect) @ L_k(t);
``reflect = -1`` gives the mirror-handed unwinding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .geom import Direction, Point

EPS_SOLVE = 1e-12
SCAN_STEP = 1e-2  # radians, bracket-location granularity for the root scan


class InvoluteError(ValueError):
    pass


class ThetaOutOfRange(InvoluteError):
    pass


class NoTangent(InvoluteError):
    pass


class NoConvergence(InvoluteError):
    def __init__(self, msg, bracket=None, residual=None):
        super().__init__(msg)
        self.bracket = bracket
        self.residual = residual


class BranchOutOfRange(InvoluteError):
    pass


@dataclass(frozen=True)
class InvolutePiece:
    """One involute piece of a base circle, order 0 being a circular arc."""

    order: int
    r0: float
    center: Point
    phase: float = 0.0
    reflect: int = 1
    coeffs: tuple[float, ...] = ()
    theta_range: tuple[float, float] = (0.0, 2.0 * math.pi)
    direction: int = 1

    def __post_init__(self):
        if self.order < 0:
            raise InvoluteError("negative order")
        if self.r0 <= 0:
            raise InvoluteError("base radius must be positive")
        if len(self.coeffs) != self.order:
            raise InvoluteError(
                f"order {self.order} needs {self.order} coefficients, got {len(self.coeffs)}")
        if self.reflect not in (1, -1) or self.direction not in (1, -1):
            raise InvoluteError("reflect and direction must be +-1")
        if self.theta_range[0] > self.theta_range[1]:
            raise InvoluteError("theta_range must be ordered")

    # -- coefficient machinery -------------------------------------------

    def _c(self) -> list[float]:
        return [self.r0, *self.coeffs]

    def a(self, i: int, t: float) -> float:
        """a_i(t) = r0 t^i/i! + c_1 t^(i-1)/(i-1)! + ... + c_i."""
        c = self._c()
        acc = 0.0
        for j in range(min(i, self.order) + 1):
            acc += c[j] * t ** (i - j) / math.factorial(i - j)
        return acc

    def _AB(self, t: float, upto: int | None = None) -> tuple[float, float]:
        k = self.order if upto is None else upto
        A = 0.0
        B = 0.0
        for i in range(k + 1):
            ai = self.a(i, t)
            if i % 2 == 0:
                A += (-1) ** (i // 2) * ai
            else:
                B += (-1) ** ((i - 1) // 2) * ai
        return A, B

    # -- frame ------------------------------------------------------------

    def to_world(self, v: np.ndarray) -> np.ndarray:
        """Map local coordinates (shape (..., 2)) into the world frame."""
        v = np.asarray(v, dtype=float)
        vx = v[..., 0]
        vy = v[..., 1] * self.reflect
        cp, sp = math.cos(self.phase), math.sin(self.phase)
        out = np.empty_like(v)
        out[..., 0] = self.center.x + cp * vx - sp * vy
        out[..., 1] = self.center.y + sp * vx + cp * vy
        return out

    def to_world_vec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        vx = v[..., 0]
        vy = v[..., 1] * self.reflect
        cp, sp = math.cos(self.phase), math.sin(self.phase)
        out = np.empty_like(v)
        out[..., 0] = cp * vx - sp * vy
        out[..., 1] = sp * vx + cp * vy
        return out

    def to_local(self, p: Point) -> tuple[float, float]:
        dx, dy = p.x - self.center.x, p.y - self.center.y
        cp, sp = math.cos(self.phase), math.sin(self.phase)
        vx = cp * dx + sp * dy
        vy = -sp * dx + cp * dy
        return vx, vy * self.reflect

    # -- geometry ----------------------------------------------------------

    def local_point(self, t: float) -> np.ndarray:
        A, B = self._AB(t)
        ct, st = math.cos(t), math.sin(t)
        return np.array([A * ct + B * st, A * st - B * ct])

    def local_velocity(self, t: float) -> np.ndarray:
        """d/dt of the local point; magnitude |a_k(t)|."""
        ak = self.a(self.order, t)
        k = self.order
        ct, st = math.cos(t), math.sin(t)
        if k % 2 == 0:
            sgn = (-1) ** (k // 2)
            return sgn * ak * np.array([-st, ct])
        sgn = (-1) ** ((k - 1) // 2)
        return sgn * ak * np.array([ct, st])

    def _check_range(self, t: float, tol: float = 1e-9):
        lo, hi = self.theta_range
        if t < lo - tol or t > hi + tol:
            raise ThetaOutOfRange(f"theta {t} outside [{lo}, {hi}]")


def evaluate(piece: InvolutePiece, theta: float) -> Point:
    """World-frame point of the piece at parameter theta."""
    piece._check_range(theta)
    w = piece.to_world(piece.local_point(theta))
    return Point(float(w[0]), float(w[1]))


def evaluate_many(piece: InvolutePiece, thetas: np.ndarray) -> np.ndarray:
    """Vectorized evaluate over an array of parameters; no range check."""
    thetas = np.asarray(thetas, dtype=float)
    k = piece.order
    c = piece._c()
    A = np.zeros_like(thetas)
    B = np.zeros_like(thetas)
    for i in range(k + 1):
        ai = np.zeros_like(thetas)
        for j in range(min(i, k) + 1):
            ai += c[j] * thetas ** (i - j) / math.factorial(i - j)
        if i % 2 == 0:
            A += (-1) ** (i // 2) * ai
        else:
            B += (-1) ** ((i - 1) // 2) * ai
    ct, st = np.cos(thetas), np.sin(thetas)
    local = np.stack([A * ct + B * st, A * st - B * ct], axis=-1)
    return piece.to_world(local)


def tangent_direction(piece: InvolutePiece, theta: float,
                      traversal: bool = True) -> Direction:
    """Unit world tangent at theta.

    With ``traversal=True`` the sign follows the piece's traversal sense
    (``direction`` field); otherwise it follows growing theta.  At a parameter
    where the speed vanishes the sign is taken from the interior of the range.
    """
    piece._check_range(theta)
    v = piece.local_velocity(theta)
    n = float(np.hypot(v[0], v[1]))
    if n < 1e-14:
        # Zero-speed endpoint: use the frame direction signed from mid-range.
        k = piece.order
        tm = 0.5 * (piece.theta_range[0] + piece.theta_range[1])
        sgn_mid = 1.0 if piece.a(k, tm) >= 0 else -1.0
        ct, st = math.cos(theta), math.sin(theta)
        if k % 2 == 0:
            v = (-1) ** (k // 2) * sgn_mid * np.array([-st, ct])
        else:
            v = (-1) ** ((k - 1) // 2) * sgn_mid * np.array([ct, st])
    else:
        v = v / n
    w = piece.to_world_vec(v)
    if traversal and piece.direction < 0:
        w = -w
    return Direction(float(w[0]), float(w[1])).unit()


def tangent_length(piece: InvolutePiece, theta: float) -> float:
    """Taut-string length |a_k(theta)|; zero for an order-0 arc."""
    piece._check_range(theta)
    if piece.order == 0:
        return 0.0
    return abs(piece.a(piece.order, theta))


def signed_string(piece: InvolutePiece, theta: float) -> float:
    """a_k(theta) without the absolute value (sign tracks the branch)."""
    if piece.order == 0:
        return 0.0
    return piece.a(piece.order, theta)


def string_roots(piece: InvolutePiece, lo: float, hi: float) -> list[float]:
    """Real roots of a_k inside [lo, hi]."""
    k = piece.order
    if k == 0:
        return []
    coeffs = [piece._c()[j] / math.factorial(k - j) for j in range(k + 1)]
    roots = np.roots(coeffs) if any(abs(c) > 0 for c in coeffs[:-1]) else []
    out = []
    for r in roots:
        if abs(r.imag) < 1e-9 and lo < r.real < hi:
            out.append(float(r.real))
    return sorted(out)


def arc_length(piece: InvolutePiece, theta_a: float, theta_b: float) -> float:
    """Exact arc length via the polynomial antiderivative a_(k+1)."""
    piece._check_range(theta_a)
    piece._check_range(theta_b)
    lo, hi = min(theta_a, theta_b), max(theta_a, theta_b)
    k = piece.order

    def F(t: float) -> float:
        # a_(k+1) with c_(k+1) = 0.
        c = piece._c()
        return sum(c[j] * t ** (k + 1 - j) / math.factorial(k + 1 - j)
                   for j in range(k + 1))

    knots = [lo, *string_roots(piece, lo, hi), hi]
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        total += abs(F(b) - F(a))
    return total


def parent_piece(piece: InvolutePiece) -> InvolutePiece:
    """The evolute: same frame and coefficients, one order lower."""
    if piece.order == 0:
        raise InvoluteError("an order-0 arc has no involute parent piece")
    return replace(piece, order=piece.order - 1, coeffs=piece.coeffs[:-1])


def make_child(piece: InvolutePiece, c_next: float,
               theta_range: tuple[float, float] | None = None,
               direction: int | None = None) -> InvolutePiece:
    """The involute of ``piece`` with new trailing coefficient ``c_next``."""
    return replace(
        piece,
        order=piece.order + 1,
        coeffs=(*piece.coeffs, c_next),
        theta_range=piece.theta_range if theta_range is None else theta_range,
        direction=piece.direction if direction is None else direction,
    )


@dataclass(frozen=True)
class AnchorSolution:
    theta: float
    c: float
    residual: float
    child: InvolutePiece


def _wrap_into(theta: float, lo: float, hi: float) -> float | None:
    """2-pi representative of theta inside [lo, hi], preferring theta itself."""
    if lo - 1e-12 <= theta <= hi + 1e-12:
        return theta
    m = math.ceil((lo - theta) / (2 * math.pi))
    cand = theta + 2 * math.pi * m
    if cand <= hi + 1e-12:
        return cand
    return None


def _newton_bisection(g: Callable[[float], float], lo: float, hi: float,
                      tol: float = 1e-14, maxit: int = 200) -> float:
    """Root of g bracketed in [lo, hi]; damped Newton with bisection fallback.

    The derivative is taken by central difference; any step leaving the
    bracket falls back to bisection, so convergence is guaranteed.
    """
    flo, fhi = g(lo), g(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise NoConvergence("no sign change in bracket", bracket=(lo, hi))
    x = 0.5 * (lo + hi)
    for _ in range(maxit):
        fx = g(x)
        if fx == 0.0:
            return x
        if flo * fx < 0:
            hi, fhi = x, fx
        else:
            lo, flo = x, fx
        if hi - lo < tol * max(1.0, abs(x)):
            return 0.5 * (lo + hi)
        h = max(1e-8, 1e-8 * abs(x))
        df = (g(x + h) - g(x - h)) / (2 * h)
        step_ok = False
        if df != 0.0:
            xn = x - fx / df
            if lo < xn < hi:
                x = xn
                step_ok = True
        if not step_ok:
            x = 0.5 * (lo + hi)
    return x


def _anchor_residual(child: InvolutePiece, theta: float, anchor: Point) -> float:
    w = child.to_world(child.local_point(theta))
    return math.hypot(w[0] - anchor.x, w[1] - anchor.y)


def solve_anchor(parent: InvolutePiece, anchor: Point, branch: int = 1,
                 method: str = "auto") -> AnchorSolution:
    """Find (theta_k, c_k) so that the involute of ``parent`` passes through
    ``anchor``.

    The child inherits the parent's frame.  For order-1 children the closed
    form is used unless ``method='numeric'``.  ``branch`` picks between the
    two arccos branches at order 1, and between the smallest (-1) and largest
    (+1) parameter root found in the parent's range at higher orders.
    Raises NoTangent, BranchOutOfRange, or NoConvergence.
    """
    if branch not in (1, -1):
        raise InvoluteError("branch must be +-1")
    k = parent.order + 1
    qx, qy = parent.to_local(anchor)
    r = math.hypot(qx, qy)
    phi = math.atan2(qy, qx)
    lo, hi = parent.theta_range

    if k == 1 and method != "numeric":
        if r < parent.r0 - 1e-12:
            raise NoTangent(f"anchor at radius {r} inside base circle {parent.r0}")
        alpha = math.acos(min(1.0, parent.r0 / r))
        theta = phi + branch * alpha
        wrapped = _wrap_into(theta, lo, hi)
        if wrapped is None:
            raise BranchOutOfRange(
                f"theta {theta} has no representative in [{lo}, {hi}]")
        theta = wrapped
        c1 = branch * math.sqrt(max(0.0, r * r - parent.r0 ** 2)) - parent.r0 * theta
        child = make_child(parent, c1)
        res = _anchor_residual(child, theta, anchor)
        return AnchorSolution(theta, c1, res, child)

    # Scalar equation free of c_k: for odd k it is E1 (A has even terms only),
    # for even k it is E2.
    if k % 2 == 1:
        def g(t: float) -> float:
            A, _ = parent._AB(t)
            return r * math.cos(t - phi) - A
    else:
        def g(t: float) -> float:
            _, B = parent._AB(t)
            return r * math.sin(t - phi) - B

    roots: list[float] = []
    n_steps = max(4, int(math.ceil((hi - lo) / SCAN_STEP)))
    ts = np.linspace(lo, hi, n_steps + 1)
    gs = [g(t) for t in ts]
    for i in range(n_steps):
        if gs[i] == 0.0:
            roots.append(float(ts[i]))
        elif gs[i] * gs[i + 1] < 0:
            roots.append(_newton_bisection(g, float(ts[i]), float(ts[i + 1])))
    if gs[-1] == 0.0:
        roots.append(float(ts[-1]))

    if not roots:
        if k == 1 and r < parent.r0:
            raise NoTangent("anchor inside base circle")
        raise BranchOutOfRange(
            f"no parameter in [{lo}, {hi}] reaches the anchor "
            f"(min |defect| {min(abs(v) for v in gs):.3e})")

    theta = max(roots) if branch == 1 else min(roots)
    c_k = _c_from_theta(parent, theta, r, phi)
    child = make_child(parent, c_k)
    res = _anchor_residual(child, theta, anchor)
    if res > 1e-6 * max(1.0, r):
        raise NoConvergence(f"anchor residual {res:.3e} too large",
                            bracket=(lo, hi), residual=res)
    return AnchorSolution(theta, c_k, res, child)


def _c_from_theta(parent: InvolutePiece, theta: float, r: float, phi: float) -> float:
    """Read c_k linearly from the anchor equation that contains it."""
    k = parent.order + 1
    A, B = parent._AB(theta)
    # Known part of a_k (coefficients up to c_(k-1)).
    P = sum(parent._c()[j] * theta ** (k - j) / math.factorial(k - j)
            for j in range(parent.order + 1))
    if k % 2 == 1:
        sgn = (-1) ** ((k - 1) // 2)
        return sgn * (r * math.sin(theta - phi) - B) - P
    sgn = (-1) ** (k // 2)
    return sgn * (r * math.cos(theta - phi) - A) - P


def anchor_equation_residual(parent: InvolutePiece, theta: float, c_k: float,
                             anchor: Point) -> float:
    """Euclidean defect of the anchor-equation pair at (theta, c_k)."""
    child = make_child(parent, c_k)
    return _anchor_residual(child, theta, anchor)


def closed_form_order1(r0: float, r1: float, phi1: float,
                       branch: int = 1) -> tuple[float, float]:
    """Order-1 anchor solution: theta_1 = phi_1 +- arccos(r0/r1) and the
    matching c_1 = (+-)sqrt(r1^2 - r0^2) - r0*theta_1."""
    if r1 < r0:
        raise NoTangent("anchor inside base circle")
    theta1 = phi1 + branch * math.acos(min(1.0, r0 / r1))
    c1 = branch * math.sqrt(max(0.0, r1 * r1 - r0 * r0)) - r0 * theta1
    return theta1, c1


def theta_for_tangent_direction(piece: InvolutePiece, d: Direction) -> float | None:
    """Parameter in the piece's range where the tangent is parallel to d.

    Uses the parity frame rule: odd orders have radial tangents, even orders
    tangential ones.  Returns None when no representative falls in range.
    """
    u = d.unit()
    # Undo world rotation and reflection.
    cp, sp = math.cos(piece.phase), math.sin(piece.phase)
    lx = cp * u.dx + sp * u.dy
    ly = (-sp * u.dx + cp * u.dy) * piece.reflect
    ang = math.atan2(ly, lx)
    if piece.order % 2 == 0:
        ang -= math.pi / 2  # tangent is u_t, at angle theta + pi/2
    lo, hi = piece.theta_range
    # Tangent parallel to +-d: candidates modulo pi.
    m = math.ceil((lo - ang) / math.pi)
    cand = ang + math.pi * m
    while cand <= hi + 1e-12:
        if cand >= lo - 1e-12:
            return min(hi, max(lo, cand))
        cand += math.pi
    return None


def split_at_string_roots(piece: InvolutePiece) -> list[InvolutePiece]:
    """Split the piece so that a_k keeps a constant sign on each part."""
    lo, hi = piece.theta_range
    knots = [lo, *string_roots(piece, lo, hi), hi]
    out = []
    for a, b in zip(knots[:-1], knots[1:]):
        if b - a > 1e-12:
            out.append(replace(piece, theta_range=(a, b)))
    return out or [piece]
