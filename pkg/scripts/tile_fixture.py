"""Tile systems on a three-row grid: containment, bounds and propagation.

Usage: python scripts/tile_fixture.py [--columns J] [--max-families N]
"""

import argparse
import time

from unionlab.fixtures import (
    section6_build,
    verify_L_propagation,
    verify_lemma_6_1,
    verify_section6_bounds,
)
from unionlab.propagation import fmt_rational
from unionlab.textio import render


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--columns", type=int, default=15)
    ap.add_argument("--max-families", type=int, default=5000)
    ap.add_argument("--max-size", type=int, default=4)
    args = ap.parse_args()

    t0 = time.perf_counter()
    B = section6_build(args.columns)
    print(f"built J={B.J} in {time.perf_counter() - t0:.1f}s: "
          f"|S|={len(B.S)} |T|={len(B.T)} |R|={len(B.R)} (R on {B.r_columns} columns)")
    tiles = len(B.a)

    rows = []
    for n in range(1, tiles + 1):
        for C in range(1, n + 2):
            r = verify_lemma_6_1(B, n, C, allow_outside_hypothesis=True)
            rows.append({
                "n": n,
                "C": C,
                "hypothesis": C <= n,
                "contained": r.holds,
                "steps": r.steps,
                "offending": B.ground.show(r.offending) if r.offending is not None else "-",
            })
    print("\ncontainment of the FBP closure in the tile span")
    print(render(rows, "table"), end="")

    rows = []
    for n in range(1, tiles + 1):
        r = verify_section6_bounds(B, n)
        rows.append({"n": n, "lambda_b": fmt_rational(r.lambda_b), "V_exact": str(r.v_exact),
                     "bound": fmt_rational(r.bound), "pass": r.passed})
    print("\nexact V of the tile family at b_n")
    print(render(rows, "table"), end="")

    rows = []
    for which in ("S", "R"):
        for L in (0, 1):
            t0 = time.perf_counter()
            rep = verify_L_propagation(B, which, L, args.max_size, args.max_families)
            rows.append({"system": which, "L": L, "families": rep.families, "pairs": rep.examined,
                         "max_V": str(rep.max_value), "exhaustive": rep.exhaustive,
                         "seconds": f"{time.perf_counter() - t0:.1f}"})
    print("\nL-propagation by enumeration")
    print(render(rows, "table"), end="")


if __name__ == "__main__":
    main()
