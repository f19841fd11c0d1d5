"""Print group structures of T_n(m), T_n^inf(m) next to rank D_n and ker eta."""
import argparse
import time

from whitneyforest.eta import ker_eta
from whitneyforest.lie import dn_rank_formula
from whitneyforest.tree_groups import group


def fmt(rank, torsion):
    parts = [f"Z^{rank}"] if rank else []
    parts += [f"Z{d}" for d in torsion]
    return " + ".join(parts) or "0"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=4)
    args = ap.parse_args()
    print(f"{'m':>2} {'n':>2} {'framed':>14} {'twisted':>14} {'D_n':>5} {'ker eta':>10} {'sec':>6}")
    for m in range(1, args.m_max + 1):
        for n in range(args.n_max + 1):
            t0 = time.perf_counter()
            _, fr = group(m, n, False)
            _, tw = group(m, n, True)
            k = ker_eta(m, n)
            print(f"{m:>2} {n:>2} {fmt(fr.rank, fr.torsion):>14} {fmt(tw.rank, tw.torsion):>14} "
                  f"{dn_rank_formula(m, n):>5} {fmt(k.rank, k.torsion):>10} "
                  f"{time.perf_counter() - t0:>6.2f}")


if __name__ == "__main__":
    main()
