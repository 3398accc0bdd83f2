"""JSON schemas for instances, paths and reports.

Floats are written with 17 significant digits, which round-trips IEEE
doubles exactly.  The writer is a small recursive serializer (the stdlib
encoder cannot be told a float format); the reader is plain ``json.loads``.
"""

from __future__ import annotations

import json
from typing import Optional, Union

from . import involute as inv
from .geom import Point, Polygon, validate_polygon
from .instances import Instance
from .path import Curve, LineSeg, SAPath


class SchemaError(ValueError):
    pass


def _fmt(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise SchemaError(f"non-finite float {x} in JSON output")
    s = format(float(x), ".17g")
    # keep integers recognizable as floats where it matters: json loads
    # "1" as int, which is fine for our readers
    return s


def dumps(obj, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(obj, dict):
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 2).lstrip()}'
            for k, v in obj.items())
        return f"{pad}{{\n{items}\n{pad}}}" if obj else f"{pad}{{}}"
    if isinstance(obj, (list, tuple)):
        inner = ", ".join(dumps(v, 0) for v in obj)
        if len(inner) <= 100:
            return f"{pad}[{inner}]"
        items = ",\n".join(dumps(v, indent + 2) for v in obj)
        return f"{pad}[\n{items}\n{pad}]"
    if isinstance(obj, bool) or obj is None:
        return pad + json.dumps(obj)
    if isinstance(obj, int):
        return pad + str(obj)
    if isinstance(obj, float):
        return pad + _fmt(obj)
    if isinstance(obj, str):
        return pad + json.dumps(obj)
    raise SchemaError(f"cannot serialize {type(obj).__name__}")


# ----------------------------------------------------------------------------
# Instances
# ----------------------------------------------------------------------------

def instance_to_dict(inst: Instance) -> dict:
    d: dict = {
        "name": inst.name,
        "vertices": [[v.x, v.y] for v in inst.polygon.vertices],
    }
    if inst.s is not None:
        d["s"] = [inst.s.x, inst.s.y]
    if inst.t is not None:
        d["t"] = [inst.t.x, inst.t.y]
    if inst.seed is not None:
        d["seed"] = inst.seed
    return d


def instance_from_dict(d: dict) -> Instance:
    try:
        verts = d["vertices"]
    except (KeyError, TypeError):
        raise SchemaError("instance JSON needs a 'vertices' list")
    if not isinstance(verts, list) or len(verts) < 3:
        raise SchemaError("'vertices' must list at least 3 [x, y] pairs")
    for v in verts:
        if not (isinstance(v, (list, tuple)) and len(v) == 2):
            raise SchemaError(f"bad vertex entry {v!r}")
    P = validate_polygon(verts)

    def opt_point(key: str) -> Optional[Point]:
        if key not in d or d[key] is None:
            return None
        v = d[key]
        if not (isinstance(v, (list, tuple)) and len(v) == 2):
            raise SchemaError(f"bad point for {key!r}: {v!r}")
        return Point(float(v[0]), float(v[1]))

    return Instance(str(d.get("name", "unnamed")), P,
                    opt_point("s"), opt_point("t"), d.get("seed"))


def load_instance(path: str) -> Instance:
    with open(path) as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON in {path}: {e}")
    return instance_from_dict(d)


def save_instance(inst: Instance, path: str) -> None:
    with open(path, "w") as f:
        f.write(dumps(instance_to_dict(inst)) + "\n")


# ----------------------------------------------------------------------------
# Paths
# ----------------------------------------------------------------------------

def _piece_to_dict(piece: Union[LineSeg, Curve]) -> dict:
    if isinstance(piece, LineSeg):
        return {"kind": "line",
                "from": [piece.a.x, piece.a.y],
                "to": [piece.b.x, piece.b.y]}
    p = piece.piece
    return {"kind": "involute",
            "order": p.order,
            "r0": p.r0,
            "center": [p.center.x, p.center.y],
            "phase": p.phase,
            "reflect": p.reflect,
            "coeffs": list(p.coeffs),
            "theta": list(p.theta_range),
            "dir": p.direction}


def _piece_from_dict(d: dict) -> Union[LineSeg, Curve]:
    kind = d.get("kind")
    if kind == "line":
        return LineSeg(Point(*map(float, d["from"])),
                       Point(*map(float, d["to"])))
    if kind == "involute":
        return Curve(inv.InvolutePiece(
            order=int(d["order"]),
            r0=float(d["r0"]),
            center=Point(*map(float, d["center"])),
            phase=float(d.get("phase", 0.0)),
            reflect=int(d.get("reflect", 1)),
            coeffs=tuple(float(c) for c in d.get("coeffs", ())),
            theta_range=tuple(map(float, d["theta"])),
            direction=int(d.get("dir", 1)),
        ))
    raise SchemaError(f"unknown piece kind {kind!r}")


def path_to_dict(path: SAPath) -> dict:
    return {
        "source": [path.source.x, path.source.y],
        "target": [path.target.x, path.target.y],
        "segments": [_piece_to_dict(p) for p in path.pieces],
    }


def path_from_dict(d: dict) -> SAPath:
    try:
        src = Point(*map(float, d["source"]))
        tgt = Point(*map(float, d["target"]))
        pieces = tuple(_piece_from_dict(p) for p in d["segments"])
    except (KeyError, TypeError) as e:
        raise SchemaError(f"bad path JSON: {e}")
    return SAPath(pieces, src, tgt)


def load_path(path: str) -> SAPath:
    with open(path) as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON in {path}: {e}")
    return path_from_dict(d)


def save_path(sa_path: SAPath, path: str) -> None:
    with open(path, "w") as f:
        f.write(dumps(path_to_dict(sa_path)) + "\n")
