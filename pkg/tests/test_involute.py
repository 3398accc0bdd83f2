"""Involute evaluation, anchor solving, and arc-length tests."""

import math
import random

import numpy as np
import pytest

from sapaths import involute as inv
from sapaths.geom import Direction, Point

from oracles import quad_arc_length, random_piece

UNIT_CIRCLE = inv.InvolutePiece(order=0, r0=1.0, center=Point(0, 0),
                                theta_range=(-10.0, 10.0))


def test_eval_order0_is_circle():
    p = inv.evaluate(UNIT_CIRCLE, 0.0)
    assert p.dist(Point(1, 0)) < 1e-15
    p = inv.evaluate(UNIT_CIRCLE, math.pi / 2)
    assert p.dist(Point(0, 1)) < 1e-15


def test_eval_order1_unwinding_start():
    piece = inv.make_child(UNIT_CIRCLE, 0.0)
    assert inv.evaluate(piece, 0.0).dist(Point(1, 0)) < 1e-15
    assert inv.tangent_length(piece, 0.0) == 0.0


def test_closed_form_anchor_polar_2_0():
    # anchor at polar (2, 0), positive branch
    theta1, c1 = inv.closed_form_order1(1.0, 2.0, 0.0, branch=1)
    assert abs(theta1 - math.acos(0.5)) < 1e-15
    child = inv.make_child(UNIT_CIRCLE, c1)
    assert inv.evaluate(child, theta1).dist(Point(2, 0)) < 1e-12
    assert abs(inv.tangent_length(child, theta1) - math.sqrt(3)) < 1e-12


def test_closed_form_anchor_on_circle():
    phi = 0.7
    theta1, c1 = inv.closed_form_order1(1.0, 1.0, phi, branch=1)
    assert abs(theta1 - phi) < 1e-15
    assert abs(c1 + 1.0 * phi) < 1e-15
    child = inv.make_child(UNIT_CIRCLE, c1)
    assert inv.tangent_length(child, theta1) < 1e-12


def test_solve_anchor_order1_matches_closed_form():
    rng = random.Random(7)
    for _ in range(100):
        r0 = rng.uniform(0.3, 2.0)
        r1 = r0 + rng.uniform(0.01, 3.0)
        phi = rng.uniform(-2.0, 2.0)
        branch = rng.choice([1, -1])
        # window narrower than 2*pi so the numeric scan sees each arccos
        # branch exactly once
        parent = inv.InvolutePiece(order=0, r0=r0, center=Point(0, 0),
                                   theta_range=(phi - 3.0, phi + 3.0))
        anchor = Point(r1 * math.cos(phi), r1 * math.sin(phi))
        sol_cf = inv.solve_anchor(parent, anchor, branch=branch)
        sol_num = inv.solve_anchor(parent, anchor, branch=branch,
                                   method="numeric")
        assert abs(sol_cf.theta - sol_num.theta) <= 1e-9
        tl = inv.tangent_length(sol_cf.child, sol_cf.theta)
        assert abs(tl - math.sqrt(r1 * r1 - r0 * r0)) <= 1e-9


def test_solve_anchor_inside_circle_raises():
    with pytest.raises(inv.NoTangent):
        inv.solve_anchor(UNIT_CIRCLE, Point(0.2, 0.1))


def test_solve_anchor_back_substitution_orders_2_to_5():
    rng = random.Random(11)
    for _ in range(50):
        piece = inv.InvolutePiece(order=0, r0=rng.uniform(0.5, 2.0),
                                  center=Point(0, 0), theta_range=(0.0, 9.0))
        for k in range(1, rng.randint(2, 5) + 1):
            theta_a = rng.uniform(1.0, 8.0)
            radial = inv.evaluate(piece, theta_a)
            out = (radial - piece.center).unit()
            anchor = radial + out.scaled(rng.uniform(0.2, 1.5))
            try:
                sol = inv.solve_anchor(piece, anchor, branch=rng.choice([1, -1]))
            except inv.InvoluteError:
                break
            assert sol.residual <= 1e-6 * max(
                1.0, anchor.dist(piece.center))
            assert inv.evaluate(sol.child, sol.theta).dist(anchor) <= 1e-6
            piece = sol.child


def test_string_property_normal_hits_parent():
    # normal at I_k(theta) passes through I_(k-1)(theta)
    rng = random.Random(3)
    for _ in range(300):
        k = rng.randint(1, 5)
        piece = random_piece(rng, k)
        lo, hi = piece.theta_range
        theta = rng.uniform(lo + 1e-3, hi - 1e-3)
        if abs(piece.a(k, theta)) < 1e-3:
            continue
        p = inv.evaluate(piece, theta)
        d = inv.tangent_direction(piece, theta)
        parent = inv.evaluate(inv.parent_piece(piece), theta)
        # parent point sits on the normal line: tangential component vanishes
        assert abs((parent - p).dot(d)) < 1e-8 * max(1.0, (parent - p).norm())


def test_arc_length_examples():
    assert abs(inv.arc_length(UNIT_CIRCLE, 0.0, math.pi / 2)
               - math.pi / 2) < 1e-15
    c1_zero = inv.make_child(UNIT_CIRCLE, 0.0)
    assert abs(inv.arc_length(c1_zero, 0.0, 1.0) - 0.5) < 1e-15


def test_arc_length_additive_and_matches_quadrature():
    rng = random.Random(5)
    for _ in range(40):
        piece = random_piece(rng, rng.randint(0, 5))
        lo, hi = piece.theta_range
        mid = rng.uniform(lo, hi)
        total = inv.arc_length(piece, lo, hi)
        split = inv.arc_length(piece, lo, mid) + inv.arc_length(piece, mid, hi)
        assert abs(total - split) <= 1e-12 * max(1.0, total)
        assert abs(total - quad_arc_length(piece, lo, hi)) \
            <= 1e-8 * max(1.0, total)


def test_tangent_direction_matches_finite_difference():
    rng = random.Random(9)
    for _ in range(50):
        piece = random_piece(rng, rng.randint(0, 4))
        lo, hi = piece.theta_range
        theta = rng.uniform(lo + 1e-2, hi - 1e-2)
        if abs(piece.a(piece.order, theta)) < 1e-2:
            continue
        d = inv.tangent_direction(piece, theta)
        h = 1e-6
        p0 = inv.evaluate(piece, theta - h)
        p1 = inv.evaluate(piece, theta + h)
        fd = (p1 - p0).unit()
        assert min((fd.dx - d.dx) ** 2 + (fd.dy - d.dy) ** 2,
                   (fd.dx + d.dx) ** 2 + (fd.dy + d.dy) ** 2) < 1e-10


def test_theta_for_tangent_direction():
    arc = inv.InvolutePiece(order=0, r0=1.0, center=Point(0, 0),
                            theta_range=(0.0, math.pi))
    th = inv.theta_for_tangent_direction(arc, Direction(1, 0))
    assert th is not None and abs(th - math.pi / 2) < 1e-12

    ramp = inv.make_child(
        inv.InvolutePiece(order=0, r0=1.0, center=Point(0, 0),
                          theta_range=(0.0, 1.0)), 0.5)
    th = inv.theta_for_tangent_direction(
        ramp, Direction(math.cos(0.3), math.sin(0.3)))
    assert th is not None and abs(th - 0.3) < 1e-12
    assert inv.theta_for_tangent_direction(
        ramp, Direction(math.cos(2.0), math.sin(2.0))) is None


def test_split_at_string_roots():
    # a_1 = r0*theta + c1 changes sign at theta = 1
    piece = inv.make_child(
        inv.InvolutePiece(order=0, r0=1.0, center=Point(0, 0),
                          theta_range=(0.0, 2.0)), -1.0)
    parts = inv.split_at_string_roots(piece)
    assert len(parts) == 2
    assert abs(parts[0].theta_range[1] - 1.0) < 1e-9
