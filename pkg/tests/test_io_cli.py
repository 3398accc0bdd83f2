"""Serialization round trips, SVG output, and CLI exit codes."""

import json
import math
import xml.etree.ElementTree as ET

import pytest

from sapaths import io_json, svg
from sapaths.cli import main
from sapaths.geom import Point
from sapaths.instances import generate
from sapaths.path import SAPath
from sapaths.shortest import shortest_sa_path


def test_instance_round_trip(tmp_path):
    inst = generate("random", 9, seed=4)
    f = tmp_path / "inst.json"
    io_json.save_instance(inst, str(f))
    back = io_json.load_instance(str(f))
    assert back.name == inst.name
    for a, b in zip(inst.polygon.vertices, back.polygon.vertices):
        assert a.dist(b) <= 1e-12
    assert back.s.dist(inst.s) <= 1e-12


def test_path_round_trip_with_curves(tmp_path):
    inst = generate("hook", 8)
    r = shortest_sa_path(inst.polygon, inst.s, inst.t)
    f = tmp_path / "path.json"
    io_json.save_path(r.path, str(f))
    back = io_json.load_path(str(f))
    assert len(back.pieces) == len(r.path.pieces)
    d1 = io_json.path_to_dict(r.path)
    d2 = io_json.path_to_dict(back)
    assert io_json.dumps(d1) == io_json.dumps(d2)


def test_seventeen_digit_floats():
    x = 0.1 + 0.2   # 0.30000000000000004
    text = io_json.dumps({"v": x})
    assert float(json.loads(text)["v"]) == x


def test_schema_errors():
    with pytest.raises(io_json.SchemaError):
        io_json.instance_from_dict({"name": "x"})
    with pytest.raises(io_json.SchemaError):
        io_json.path_from_dict({"source": [0, 0], "target": [1, 1],
                                "segments": [{"kind": "helix"}]})


def test_svg_well_formed_and_in_viewport(tmp_path):
    inst = generate("hook", 8)
    r = shortest_sa_path(inst.polygon, inst.s, inst.t)
    doc = svg.render_svg(inst.polygon, r.path, inst.s, inst.t)
    root = ET.fromstring(doc)
    x0, y0, w, h = map(float, root.attrib["viewBox"].split())
    for poly in root.iter("{http://www.w3.org/2000/svg}polyline"):
        for pair in poly.attrib["points"].split():
            px, py = map(float, pair.split(","))
            assert x0 - 1e-6 <= px <= x0 + w + 1e-6
            # y is rendered under a scale(1,-1) flip
            assert y0 - 1e-6 <= -py <= y0 + h + 1e-6


def test_svg_min_density():
    inst = generate("hook", 8)
    r = shortest_sa_path(inst.polygon, inst.s, inst.t)
    for piece in r.path.pieces:
        assert len(svg._sample(piece, 8)) >= 8


def test_cli_check_polygon_exit_codes(tmp_path, capsys):
    sq = tmp_path / "sq.json"
    sq.write_text(json.dumps(
        {"name": "sq", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}))
    assert main(["check-polygon", str(sq)]) == 0

    u = tmp_path / "u.json"
    io_json.save_instance(generate("comb", 8), str(u))
    capsys.readouterr()
    assert main(["check-polygon", str(u)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["witness"]["kind"] == "half-strip"

    garbage = tmp_path / "bad.json"
    garbage.write_text("{nope")
    assert main(["check-polygon", str(garbage)]) == 2


def test_cli_shortest_path_exit_codes(tmp_path, capsys):
    sq = tmp_path / "sq.json"
    sq.write_text(json.dumps(
        {"name": "sq", "vertices": [[0, 0], [4, 0], [4, 4], [0, 4]],
         "s": [1, 1], "t": [3, 3]}))
    out = tmp_path / "p.json"
    assert main(["shortest-path", str(sq), "--json", str(out)]) == 0
    capsys.readouterr()
    d = json.loads(out.read_text())
    assert len(d["segments"]) == 1 and d["segments"][0]["kind"] == "line"

    sp = tmp_path / "spiral.json"
    io_json.save_instance(generate("spiral", 8), str(sp))
    assert main(["shortest-path", str(sp)]) == 3
    rep = json.loads(capsys.readouterr().out)
    assert rep["witness"]["kind"] == "separation"

    assert main(["shortest-path", str(sq), "--s", "9,9"]) == 2


def test_cli_verify_and_render(tmp_path, capsys):
    hk = tmp_path / "hook.json"
    io_json.save_instance(generate("hook", 8), str(hk))
    pj = tmp_path / "path.json"
    sv = tmp_path / "fig.svg"
    assert main(["shortest-path", str(hk), "--json", str(pj),
                 "--svg", str(sv)]) == 0
    capsys.readouterr()
    assert main(["verify-path", str(hk), str(pj)]) == 0
    capsys.readouterr()
    assert sv.exists() and ET.fromstring(sv.read_text()) is not None

    bad = tmp_path / "bad_path.json"
    bad.write_text(json.dumps({
        "source": [0.5, 3.0], "target": [1.2, 0.5],
        "segments": [{"kind": "line", "from": [0.5, 3.0], "to": [3.0, 0.3]},
                     {"kind": "line", "from": [3.0, 0.3],
                      "to": [1.2, 0.5]}]}))
    assert main(["verify-path", str(hk), str(bad)]) == 1
    capsys.readouterr()
    assert main(["render", str(hk), str(pj), "--out",
                 str(tmp_path / "r.svg")]) == 0


def test_cli_gen_deterministic_bytes(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["gen", "--kind", "comb", "--n", "8", "--seed", "1",
                 "--out", str(a)]) == 0
    assert main(["gen", "--kind", "comb", "--n", "8", "--seed", "1",
                 "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    # unsupported kinds are rejected at argument parsing time
    with pytest.raises(SystemExit):
        main(["gen", "--kind", "dodecahedron", "--n", "8"])
