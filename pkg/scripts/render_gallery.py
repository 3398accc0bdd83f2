#!/usr/bin/env python3
"""Render an SVG gallery: one image per instance family, with the computed
shortest self-approaching path when one exists."""

import argparse
import os
import sys

from sapaths import instances
from sapaths.shortest import shortest_sa_path
from sapaths.svg import save_svg


CASES = [
    ("convex", 8, {}),
    ("random", 9, {}),
    ("comb", 8, {}),
    ("hook", 8, {}),
    ("spiral", 8, {"laps": 1.4}),
    ("spiral", 8, {}),               # deep winding: no path from s
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="gallery", help="output directory")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--density", type=int, default=64,
                    help="samples per curved piece")
    args = ap.parse_args(argv)

    os.makedirs(args.out, exist_ok=True)
    for kind, n, kwargs in CASES:
        ins = instances.generate(kind, n, seed=args.seed, **kwargs)
        res = shortest_sa_path(ins.polygon, ins.s, ins.t)
        tag = "deep" if kind == "spiral" and not kwargs else kind
        name = os.path.join(args.out, f"{tag}-{n}.svg")
        save_svg(name, ins.polygon, res.path, s=ins.s, t=ins.t,
                 density=args.density)
        status = (f"{len(res.path.pieces)} pieces" if res.reachable
                  else "not reachable")
        print(f"{name}: {status}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
