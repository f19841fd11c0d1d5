"""Compute ker eta at n = 6 and report matrix sizes along the way."""
import argparse
import json
import time

from whitneyforest.eta import ker_eta
from whitneyforest.tree_groups import group


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--n", type=int, default=6)
    args = ap.parse_args()
    for m in args.m:
        t0 = time.perf_counter()
        p, s = group(m, args.n, True)
        t1 = time.perf_counter()
        k = ker_eta(m, args.n)
        t2 = time.perf_counter()
        print(json.dumps({
            "m": m, "n": args.n,
            "generators": len(p.generators), "relations": len(p.relations),
            "unit_pivots": len(s.unit_rows), "residual_rows": len(s.residual),
            "residual_cols": len(s.survivors),
            "group": s.to_json(),
            "kernel": k.to_json(),
            "seconds": {"group": round(t1 - t0, 2), "kernel": round(t2 - t1, 2)},
        }, sort_keys=True))


if __name__ == "__main__":
    main()
