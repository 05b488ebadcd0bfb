"""Exact level-one failure tables for the three canonical systems.

Writes one CSV per system (tmax, tmin, tort) with the exact V next to the
lower bound it must reach.  Usage: python scripts/level_tables.py [--out DIR]
"""

import argparse
import time
from pathlib import Path

from unionlab.canonical import make_spread, verify_level_one_failure
from unionlab.decisive_weight import verify_tort_failure
from unionlab.propagation import fmt_rational
from unionlab.textio import render


def rows_of(rows):
    return [
        {
            "n": r.n,
            "block_size": r.block_size,
            "lambda_b": fmt_rational(r.lambda_b),
            "V_exact": str(r.v_exact),
            "bound": fmt_rational(r.bound),
            "pass": r.passed,
        }
        for r in rows
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=7, help="last level for tmax and tmin")
    ap.add_argument("--tort-levels", type=int, default=5)
    ap.add_argument("--out", type=Path, default=None, help="directory for CSV files")
    args = ap.parse_args()

    tables = {}
    for kind in ("tmax", "tmin"):
        t0 = time.perf_counter()
        tables[kind] = rows_of(verify_level_one_failure(kind, args.levels))
        print(f"# {kind}: {time.perf_counter() - t0:.2f}s")
    t0 = time.perf_counter()
    spread = make_spread(levels=args.tort_levels)
    tables["tort"] = rows_of(verify_tort_failure(spread))
    print(f"# tort: {time.perf_counter() - t0:.2f}s")

    for kind, rows in tables.items():
        text = render(rows, "csv")
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{kind}_levels.csv").write_text(text)
        print(f"\n[{kind}]")
        print(render(rows, "table"), end="")


if __name__ == "__main__":
    main()
