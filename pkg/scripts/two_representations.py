"""Two isomorphic semilattices whose traces on one spread differ.

Usage: python scripts/two_representations.py [--N 4] [--M 5]
"""

import argparse

from unionlab.canonical import contains_canonical, restrict, tmin
from unionlab.fixtures import example_2_13, same_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=4)
    ap.add_argument("--M", type=int, default=5)
    args = ap.parse_args()

    ex = example_2_13(args.N, args.M)
    print(f"|S| = {len(ex.S)}, |S'| = {len(ex.S_prime)}, same table: "
          f"{same_table(ex.S, ex.S_prime, ex.correspondence())}")
    traces, _ = restrict(ex.S, ex.spread.support)
    full = tmin(ex.spread)
    print(f"traces of S on the spread: {len(traces)}; T_min of the spread: {len(full)}")
    missing = sorted(set(full.members) - set(traces.members))
    print("T_min members without a preimage:", ", ".join(ex.S.ground.show(m) for m in missing))
    print("S contains T_min of the blocks from level 2 on:",
          contains_canonical(ex.S, ex.tmin_spread, "tmin").complete)
    for kind in ("tmax", "tmin", "tort"):
        w = contains_canonical(ex.S, ex.spread, kind)
        print(f"  {kind} on all {args.N} blocks: complete={w.complete} missing={w.missing}")


if __name__ == "__main__":
    main()
