#!/usr/bin/env python3
"""Segment-count growth study on the spiral and hook families.

Solves the shortest self-approaching path for increasing polygon sizes and
reports the number of output pieces next to the n^2 envelope.
"""

import argparse
import json
import sys
import time

from sapaths import instances
from sapaths.path import detour_ratio, path_length
from sapaths.shortest import shortest_sa_path


def run(kinds, sizes, laps):
    rows = []
    for kind in kinds:
        for n in sizes:
            kwargs = {"laps": laps} if kind == "spiral" else {}
            ins = instances.generate(kind, n, **kwargs)
            t0 = time.perf_counter()
            res = shortest_sa_path(ins.polygon, ins.s, ins.t)
            dt = time.perf_counter() - t0
            if not res.reachable:
                rows.append({"kind": kind, "n": n, "status": "not_reachable",
                             "seconds": round(dt, 4)})
                continue
            rows.append({
                "kind": kind,
                "n": n,
                "status": "path",
                "pieces": len(res.path.pieces),
                "length": path_length(res.path),
                "detour": detour_ratio(res.path),
                "seconds": round(dt, 4),
            })
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kinds", nargs="+", default=["spiral", "hook"],
                    choices=sorted(instances._KINDS))
    ap.add_argument("--sizes", nargs="+", type=int,
                    default=[8, 16, 32, 64, 128])
    ap.add_argument("--laps", type=float, default=1.4,
                    help="spiral winding depth (reachable below about 1.6)")
    ap.add_argument("--json", metavar="FILE", help="also dump rows as JSON")
    args = ap.parse_args(argv)

    rows = run(args.kinds, args.sizes, args.laps)
    print(f"{'kind':<8}{'n':>5}{'pieces':>8}{'n^2':>7}{'ratio':>9}"
          f"{'detour':>9}{'sec':>8}")
    for r in rows:
        if r["status"] != "path":
            print(f"{r['kind']:<8}{r['n']:>5}{'--':>8}  not reachable")
            continue
        print(f"{r['kind']:<8}{r['n']:>5}{r['pieces']:>8}{r['n'] ** 2:>7}"
              f"{r['pieces'] / r['n'] ** 2:>9.4f}{r['detour']:>9.4f}"
              f"{r['seconds']:>8.3f}")
    if args.json:
        with open(args.json, "w") as f:
            json.dump(rows, f, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
