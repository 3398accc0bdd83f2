"""Command-line surface.

Exit codes are fixed for scriptability: 0 success (path found / polygon is
self-approaching / verification passed), 1 negative verdict or failed
verification, 2 input error, 3 target not reachable (witness emitted),
4 solver failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import io_json, svg
from .geom import GeometryError, Point, set_geometry_tolerance
from .instances import UnsupportedKind, generate
from .path import verify_normal_property, verify_triples
from .polygon_check import is_self_approaching_polygon
from .shortest import EndpointOutside, SolverFailure, shortest_sa_path

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_NOT_REACHABLE = 3
EXIT_SOLVER_FAILURE = 4


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_INPUT


def _parse_xy(text: str) -> Point:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'x,y', got {text!r}")
    return Point(float(parts[0]), float(parts[1]))


def _apply_tol(args) -> None:
    # precedence: flag > SA_GEOM_TOL env > built-in default
    if getattr(args, "geom_tol", None) is not None:
        set_geometry_tolerance(args.geom_tol)
    elif "SA_GEOM_TOL" in os.environ:
        set_geometry_tolerance(float(os.environ["SA_GEOM_TOL"]))


def cmd_check_polygon(args) -> int:
    try:
        inst = io_json.load_instance(args.instance)
    except (OSError, io_json.SchemaError, GeometryError) as e:
        return _fail(str(e))
    report = is_self_approaching_polygon(inst.polygon)
    print(io_json.dumps(report.to_dict()))
    return EXIT_OK if report.verdict == "yes" else EXIT_NEGATIVE


def cmd_shortest_path(args) -> int:
    try:
        inst = io_json.load_instance(args.instance)
        s = _parse_xy(args.s) if args.s else inst.s
        t = _parse_xy(args.t) if args.t else inst.t
        if s is None or t is None:
            raise ValueError("need s and t (instance fields or --s/--t flags)")
    except (OSError, io_json.SchemaError, GeometryError, ValueError) as e:
        return _fail(str(e))
    try:
        result = shortest_sa_path(inst.polygon, s, t)
    except EndpointOutside as e:
        return _fail(str(e))
    except SolverFailure as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER_FAILURE
    if result.status == "not_reachable":
        print(io_json.dumps({"status": "not_reachable",
                             "witness": result.witness}))
        return EXIT_NOT_REACHABLE
    path_dict = io_json.path_to_dict(result.path)
    print(io_json.dumps({"status": "path", **path_dict}))
    if args.json:
        with open(args.json, "w") as f:
            f.write(io_json.dumps(path_dict) + "\n")
    if args.svg:
        svg.save_svg(args.svg, inst.polygon, result.path, s, t)
    return EXIT_OK


def cmd_verify_path(args) -> int:
    try:
        inst = io_json.load_instance(args.instance)
        path = io_json.load_path(args.path)
    except (OSError, io_json.SchemaError, GeometryError) as e:
        return _fail(str(e))
    triples = verify_triples(path, samples=args.samples, tol=args.tol)
    normal = verify_normal_property(path, polygon=inst.polygon,
                                    samples_per_piece=args.samples,
                                    tol=args.tol)
    out = {"triples": triples.to_dict(), "normal": normal.to_dict()}
    print(io_json.dumps(out))
    return EXIT_OK if triples.passed and normal.passed else EXIT_NEGATIVE


def cmd_gen(args) -> int:
    try:
        inst = generate(args.kind, args.n, args.seed)
    except (UnsupportedKind, ValueError) as e:
        return _fail(str(e))
    text = io_json.dumps(io_json.instance_to_dict(inst))
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        inst = io_json.load_instance(args.instance)
        path = io_json.load_path(args.path) if args.path else None
        svg.save_svg(args.out, inst.polygon, path, inst.s, inst.t,
                     density=args.density)
    except (OSError, io_json.SchemaError, GeometryError) as e:
        return _fail(str(e))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sapaths",
        description="Self-approaching paths in simple polygons")
    ap.add_argument("--geom-tol", type=float, default=None,
                    help="geometric predicate tolerance "
                         "(beats SA_GEOM_TOL, which beats 1e-9)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-polygon",
                       help="decide whether the polygon is self-approaching")
    p.add_argument("instance")
    p.set_defaults(func=cmd_check_polygon)

    p = sub.add_parser("shortest-path",
                       help="shortest self-approaching s-t path or witness")
    p.add_argument("instance")
    p.add_argument("--s", default=None, help="source as 'x,y'")
    p.add_argument("--t", default=None, help="target as 'x,y'")
    p.add_argument("--json", default=None, help="write the path JSON here")
    p.add_argument("--svg", default=None, help="write an SVG figure here")
    p.set_defaults(func=cmd_shortest_path)

    p = sub.add_parser("verify-path",
                       help="verify a path file against both checkers")
    p.add_argument("instance")
    p.add_argument("path")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_verify_path)

    p = sub.add_parser("gen", help="generate a deterministic instance")
    p.add_argument("--kind", required=True,
                   choices=["convex", "random", "comb", "spiral", "hook"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("render", help="render an instance (and path) to SVG")
    p.add_argument("instance")
    p.add_argument("path", nargs="?", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--density", type=int, default=64)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_tol(args)
    except (GeometryError, ValueError) as e:
        return _fail(str(e))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
