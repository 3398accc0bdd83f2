"""Acceptance gate: nine end-to-end criteria, one pass/fail line each.

Each criterion prints exactly one summary line of the form

    [criterion N] PASS <what was checked> (<key metrics>)

and fails the test if the stated tolerances or runtimes are exceeded.
Every check is routed through an oracle that differs from the
implementation it judges (see tests/oracles.py).
"""

import math
import random
import time

import numpy as np

from sapaths import involute as inv
from sapaths import instances, io_json
from sapaths.geodesic import geodesic, inflection_points
from sapaths.geom import Point, validate_polygon
from sapaths.path import (
    Curve,
    LineSeg,
    SAPath,
    bend_points,
    detour_ratio,
    path_length,
    sample_path,
    verify_normal_property,
    verify_triples,
)
from sapaths.polygon_check import (
    disk_component_count,
    half_strip_brute_force,
    is_self_approaching_polygon,
)
from sapaths.shortest import shortest_sa_path

from oracles import (
    dijkstra_geodesic_length,
    random_simple_polygon,
    random_piece,
    witness_curve_crossing,
)


def _report(num: int, ok: bool, detail: str) -> None:
    line = f"[criterion {num}] {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    assert ok, line


def _interior(P, rng, k):
    from sapaths.geom import INSIDE, point_in_polygon

    x0, y0, x1, y1 = P.bbox()
    out = []
    while len(out) < k:
        q = Point(rng.uniform(x0, x1), rng.uniform(y0, y1))
        if point_in_polygon(P, q, eps=1e-6) == INSIDE:
            out.append(q)
    return out


# ---------------------------------------------------------------------------
# 1. order-1 closed form vs numeric anchor solver
# ---------------------------------------------------------------------------

def test_criterion_1_closed_form_agreement():
    rng = random.Random(101)
    t0 = time.perf_counter()
    worst_dt = 0.0
    worst_dl = 0.0
    for _ in range(100):
        r0 = rng.uniform(0.3, 2.5)
        r1 = r0 + rng.uniform(0.01, 4.0)
        phi = rng.uniform(-3.0, 3.0)
        branch = rng.choice([1, -1])
        # window narrower than 2*pi: one arccos representative per branch
        parent = inv.InvolutePiece(order=0, r0=r0, center=Point(0, 0),
                                   theta_range=(phi - 3.0, phi + 3.0))
        anchor = Point(r1 * math.cos(phi), r1 * math.sin(phi))
        theta_cf, c_cf = inv.closed_form_order1(r0, r1, phi, branch=branch)
        sol = inv.solve_anchor(parent, anchor, branch=branch, method="numeric")
        worst_dt = max(worst_dt, abs(sol.theta - theta_cf))
        tl = inv.tangent_length(sol.child, sol.theta)
        worst_dl = max(worst_dl, abs(tl - math.sqrt(r1 * r1 - r0 * r0)))
    dt = time.perf_counter() - t0
    ok = worst_dt <= 1e-9 and worst_dl <= 1e-9 and dt < 1.0
    _report(1, ok, "closed form vs numeric on 100 anchors "
            f"(max |dtheta|={worst_dt:.2e}, max |dlen|={worst_dl:.2e}, "
            f"{dt:.2f}s)")


# ---------------------------------------------------------------------------
# 2. back-substitution chains for orders 2-5
# ---------------------------------------------------------------------------

def test_criterion_2_back_substitution():
    rng = random.Random(202)
    t0 = time.perf_counter()
    worst_res = 0.0
    worst_eval = 0.0
    chains = 0
    while chains < 50:
        piece = inv.InvolutePiece(order=0, r0=rng.uniform(0.5, 2.0),
                                  center=Point(0, 0), theta_range=(0.0, 9.0))
        depth = rng.randint(2, 5)
        ok_chain = True
        for _ in range(depth):
            theta_a = rng.uniform(1.0, 8.0)
            radial = inv.evaluate(piece, theta_a)
            out = (radial - piece.center).unit()
            anchor = radial + out.scaled(rng.uniform(0.2, 1.5))
            try:
                sol = inv.solve_anchor(piece, anchor,
                                       branch=rng.choice([1, -1]))
            except inv.InvoluteError:
                ok_chain = False
                break
            # algebraic residual of the anchor-equation pair at (theta, c)
            vx, vy = sol.child.to_local(anchor)
            r_loc, phi_loc = math.hypot(vx, vy), math.atan2(vy, vx)
            A, B = sol.child._AB(sol.theta)
            res = math.hypot(A - r_loc * math.cos(sol.theta - phi_loc),
                             B - r_loc * math.sin(sol.theta - phi_loc))
            worst_res = max(worst_res, res)
            worst_eval = max(
                worst_eval, inv.evaluate(sol.child, sol.theta).dist(anchor))
            piece = sol.child
        if ok_chain and piece.order >= 2:
            chains += 1
    dt = time.perf_counter() - t0
    ok = worst_res <= 1e-12 and worst_eval <= 1e-6 and dt < 10.0
    _report(2, ok, "50 anchor chains, orders 2-5 "
            f"(max Eq.(1) residual={worst_res:.2e}, "
            f"max eval defect={worst_eval:.2e}, {dt:.2f}s)")


# ---------------------------------------------------------------------------
# 3. string property: normal through the parent involute
# ---------------------------------------------------------------------------

def test_criterion_3_string_property():
    rng = random.Random(303)
    worst = 0.0
    done = 0
    while done < 1000:
        k = rng.randint(0, 5)
        piece = random_piece(rng, k)
        lo, hi = piece.theta_range
        theta = rng.uniform(lo + 1e-3, hi - 1e-3)
        if abs(piece.a(piece.order, theta)) < 1e-3:
            continue  # cusp: tangent undefined
        p = inv.evaluate(piece, theta)
        d = inv.tangent_direction(piece, theta)
        if k == 0:
            parent = piece.center
        else:
            parent = inv.evaluate(inv.parent_piece(piece), theta)
        # distance from the parent point to the normal line at p
        worst = max(worst, abs((parent - p).dot(d)))
        done += 1
    ok = worst <= 1e-8
    _report(3, ok, "normal through parent on 1000 samples, orders 0-5 "
            f"(max line distance={worst:.2e})")


# ---------------------------------------------------------------------------
# 4. verifier cross-agreement on a mixed path corpus
# ---------------------------------------------------------------------------

def _corpus_paths(rng):
    paths = []
    for _ in range(150):                       # segments
        a = Point(rng.uniform(-4, 4), rng.uniform(-4, 4))
        b = Point(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if a.dist(b) > 1e-6:
            paths.append(SAPath((LineSeg(a, b),), a, b))
    for _ in range(100):                       # circular arcs
        span = rng.choice([rng.uniform(0.2, math.pi - 0.1),
                           rng.uniform(math.pi + 0.3, 2.5 * math.pi)])
        lo = rng.uniform(-3, 3)
        arc = Curve(inv.InvolutePiece(
            order=0, r0=rng.uniform(0.5, 2.0),
            center=Point(rng.uniform(-3, 3), rng.uniform(-3, 3)),
            phase=rng.uniform(-3, 3), theta_range=(lo, lo + span),
            direction=rng.choice([1, -1])))
        paths.append(SAPath((arc,), arc.start(), arc.end()))
    for _ in range(150):                       # polylines
        pts = [Point(rng.uniform(0, 4), rng.uniform(0, 4))
               for _ in range(rng.randint(3, 6))]
        if min(a.dist(b) for a, b in zip(pts[:-1], pts[1:])) > 1e-3:
            paths.append(SAPath.from_points(pts))
    for _ in range(100):                       # winding involute chains
        base = inv.InvolutePiece(
            order=0, r0=rng.uniform(0.5, 1.5),
            center=Point(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            phase=rng.uniform(-3, 3),
            theta_range=(0.0, rng.uniform(1.0, 3.0)),
            reflect=rng.choice([1, -1]))
        piece = Curve(inv.make_child(base, 0.0, direction=-1))
        paths.append(SAPath((piece,), piece.start(), piece.end()))
    return paths[:500]


def test_criterion_4_verifier_cross_agreement():
    rng = random.Random(404)
    paths = _corpus_paths(rng)
    assert len(paths) == 500
    agree = 0
    for p in paths:
        r1 = verify_triples(p, samples=160)
        r2 = verify_normal_property(p, samples_per_piece=48)
        if r1.passed == r2.passed:
            agree += 1

    right = SAPath.from_points([Point(0, 0), Point(1, 0), Point(1, 1)])
    right_ok = (verify_triples(right).passed
                and verify_normal_property(right).passed)

    a, b, c = Point(0, 0), Point(2, 0), Point(0.5, 0.5)
    bad = SAPath.from_points([a, b, c])
    rb = verify_triples(bad)
    w = rb.witness or {}
    # the vertex triple itself violates |ac| >= |bc| at 0.707 < 1.581
    triple_bad = (abs(a.dist(c) - 0.7071) < 1e-3
                  and abs(b.dist(c) - 1.5811) < 1e-3
                  and a.dist(c) < b.dist(c))
    witness_ok = (not rb.passed and not verify_normal_property(bad).passed
                  and w and w["dist_ac"] < w["dist_bc"] and triple_bad)

    ok = agree == 500 and right_ok and witness_ok
    _report(4, ok, f"verifier agreement on {agree}/500 corpus paths; "
            "90-degree bend passes; obtuse polyline fails, vertex triple "
            f"|ac|={a.dist(c):.3f} < |bc|={b.dist(c):.3f}, worst witness "
            f"{w.get('dist_ac', float('nan')):.3f} < "
            f"{w.get('dist_bc', float('nan')):.3f}")


# ---------------------------------------------------------------------------
# 5. structural suite on 100 solved instances
# ---------------------------------------------------------------------------

def _suite_instances():
    out = []
    for seed in range(46):
        out.append(instances.gen_random(5 + seed % 6, seed=seed))
    for seed in range(40):
        out.append(instances.gen_convex(4 + seed % 8, seed=seed))
    for n in (8, 10, 12, 16, 20, 24, 32, 40, 48, 56, 64, 72):
        out.append(instances.gen_hook(n))
    for n in (8, 12, 16, 20, 24, 28, 32, 36, 40, 48, 56, 64):
        out.append(instances.gen_spiral(n, laps=1.4))
    return out


def test_criterion_5_structural_suite():
    t0 = time.perf_counter()
    solved = 0
    worst_margin = math.inf
    max_detour = 0.0
    for ins in _suite_instances():
        if solved >= 100:
            break
        P, s, t = ins.polygon, ins.s, ins.t
        res = shortest_sa_path(P, s, t)
        if not res.reachable:
            continue  # a few random instances honestly have no SA path
        path = res.path
        r1 = verify_triples(path, samples=200, tol=1e-7)
        r2 = verify_normal_property(path, polygon=P, tol=1e-7)
        assert r1.passed and r2.passed, ins.name
        worst_margin = min(worst_margin, r1.worst_margin, r2.worst_margin)

        for b in bend_points(path, angle_tol=1e-6):
            assert min(b.dist(v) for v in P.vertices) <= 1e-6, ins.name

        g = geodesic(P, s, t)
        junctions = ([pc.start() for pc in path.pieces]
                     + [path.pieces[-1].end()])
        dense = sample_path(path, 128)
        for q in inflection_points(g):
            d_j = min(q.dist(j) for j in junctions)
            d_s = float(np.min(np.hypot(dense[:, 0] - q.x,
                                        dense[:, 1] - q.y)))
            assert min(d_j, d_s) <= 1e-6, ins.name

        assert path_length(path) >= g.length() - 1e-9, ins.name
        assert abs(g.length() - dijkstra_geodesic_length(P, s, t)) <= 1e-7
        dr = detour_ratio(path)
        assert dr <= 5.3331, ins.name
        max_detour = max(max_detour, dr)

        rerun = shortest_sa_path(P, s, t)
        assert (io_json.dumps(io_json.path_to_dict(rerun.path))
                == io_json.dumps(io_json.path_to_dict(path))), ins.name
        solved += 1
    dt = time.perf_counter() - t0
    ok = solved == 100 and dt < 60.0
    _report(5, ok, f"{solved}/100 instances: both verifiers at 1e-7 "
            f"(worst margin {worst_margin:.1e}), bends on vertices, "
            f"inflections contained, detour <= {max_detour:.3f}, "
            f"bit-identical reruns ({dt:.1f}s)")


# ---------------------------------------------------------------------------
# 6. non-existence witness on the spiral family
# ---------------------------------------------------------------------------

def test_criterion_6_non_existence():
    ins = instances.gen_spiral(8)             # deep winding, laps 2.4
    res = shortest_sa_path(ins.polygon, ins.s, ins.t)
    blocked = res.status == "not_reachable"
    recheck = blocked and witness_curve_crossing(res.witness)

    # same barrier, source moved before the dead region
    s2 = Point(-0.446, 1.372)
    res2 = shortest_sa_path(ins.polygon, s2, ins.t)
    open_ok = (res2.reachable
               and verify_triples(res2.path, tol=1e-7).passed
               and verify_normal_property(res2.path, polygon=ins.polygon,
                                          tol=1e-7).passed)
    ok = blocked and recheck and open_ok
    _report(6, ok, "deep spiral: NotReachable, separation witness re-verified "
            f"by curve sampling ({recheck}); moved source yields a verified "
            f"path of {len(res2.path.pieces) if res2.reachable else 0} pieces")


# ---------------------------------------------------------------------------
# 7. polygon decision: sweep vs brute force
# ---------------------------------------------------------------------------

def _decision_corpus(rng):
    polys = []
    for n, seed in [(6, 0), (10, 1), (16, 2)]:
        polys.append(("convex", instances.gen_convex(n, seed).polygon))
    for seed in range(10):
        polys.append(("random", instances.gen_random(5 + seed % 5,
                                                     seed=seed).polygon))
    for n in (8, 12, 16):
        polys.append(("comb", instances.gen_comb(n).polygon))
    for n in (8, 16):
        polys.append(("hook", instances.gen_hook(n).polygon))
    polys.append(("spiral", instances.gen_spiral(8).polygon))
    for _ in range(100):
        polys.append(("rand12", random_simple_polygon(rng, rng.randint(4, 12))))
    return polys


def test_criterion_7_polygon_decision():
    rng = random.Random(707)
    t0 = time.perf_counter()
    polys = _decision_corpus(rng)
    agree = 0
    max_ratio = 0.0
    for kind, P in polys:
        fast = is_self_approaching_polygon(P)
        brute = half_strip_brute_force(P)
        assert fast.verdict == brute.verdict, kind
        agree += 1
        if kind == "convex":
            assert fast.verdict == "yes"
        max_ratio = max(max_ratio, sum(fast.tests_per_pass) / (16.0 * P.n))
        assert sum(fast.tests_per_pass) <= 16 * P.n, kind

    u = is_self_approaching_polygon(instances.gen_comb(8).polygon)
    w = u.witness or {}
    u_ok = (u.verdict == "no" and w.get("boundary_edge") == 5
            and w.get("strip_edge") == 3
            and Point(*w["point"]).dist(Point(1, 2)) < 0.5)
    dt = time.perf_counter() - t0
    ok = agree == len(polys) and u_ok and dt < 10.0
    _report(7, ok, f"sweep == brute force on {agree}/{len(polys)} polygons; "
            "convex all yes; U-polygon no with half-strip witness "
            f"(edges {w.get('boundary_edge')}/{w.get('strip_edge')}); "
            f"counters <= 16n (max {max_ratio:.2f} of bound); {dt:.2f}s")


# ---------------------------------------------------------------------------
# 8. characterization consistency on "yes" polygons
# ---------------------------------------------------------------------------

def test_criterion_8_characterization_consistency():
    rng = random.Random(808)
    polys = [P for _, P in _decision_corpus(rng)
             if is_self_approaching_polygon(P).verdict == "yes"]
    assert polys, "corpus must contain yes polygons"
    n_disks = 0
    n_pairs = 0
    for P in polys:
        x0, y0, x1, y1 = P.bbox()
        diam = math.hypot(x1 - x0, y1 - y0)
        for c in _interior(P, rng, 50):
            r = rng.uniform(0.05, 0.6) * diam
            assert disk_component_count(P, c, r, resolution=48) == 1
            n_disks += 1
        pts = _interior(P, rng, 40)
        for a, b in zip(pts[::2], pts[1::2]):
            g = geodesic(P, a, b)
            fwd = SAPath.from_points(g.points)
            rev = SAPath.from_points(list(reversed(g.points)))
            assert verify_triples(fwd, tol=1e-7).passed, "forward"
            assert verify_triples(rev, tol=1e-7).passed, "reverse"
            n_pairs += 1
    _report(8, True, f"{len(polys)} yes polygons: {n_disks} disk samples all "
            f"single-component; {n_pairs} geodesics increasing-chord "
            "in both directions")


# ---------------------------------------------------------------------------
# 9. growth sanity: segment counts vs C*n^2
# ---------------------------------------------------------------------------

def test_criterion_9_growth_sanity():
    counts = {}
    for n in (8, 16, 32, 64):
        for kind, ins in (("spiral", instances.gen_spiral(n, laps=1.4)),
                          ("hook", instances.gen_hook(n))):
            res = shortest_sa_path(ins.polygon, ins.s, ins.t)
            assert res.reachable, ins.name
            counts[(kind, n)] = len(res.path.pieces)
    C = max(c / (n * n) for (_, n), c in counts.items())
    ok = C <= 2.0
    rec = ", ".join(f"{k}-{n}:{c}" for (k, n), c in sorted(counts.items()))
    _report(9, ok, f"segment counts [{rec}] fit C*n^2 with C={C:.3f}")
