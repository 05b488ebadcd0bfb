"""Shatter-or-decide search on a few canonical inputs.

Usage: python scripts/dichotomy_demo.py
"""

from unionlab.canonical import make_spread, power_set_system, tmax, tort
from unionlab.dichotomy import (
    DecisiveReport,
    ShatterWitness,
    dichotomy_search,
    refined_structure,
)
from unionlab.setsystem import SetSystem, union_closure
from unionlab.textio import join_labels


def describe(S, res):
    g = S.ground
    if isinstance(res, ShatterWitness):
        return f"shatter  seq={join_labels(g, res.sequence)}  {res.window}  minima={res.cell_minima}"
    if isinstance(res, DecisiveReport):
        return f"decisive  class={res.decisive_class}  max statistic={res.max_statistic}  {res.window}"
    return f"inconclusive  {res.reason}  after {res.rounds} round(s)  {res.window}"


def main():
    sp = make_spread((4, 5, 6))
    ps = power_set_system(sp.ground, sp.support)
    ps = SetSystem.of(sp.ground, [m for m in ps.members if m], closed=True)
    cases = [
        ("power set, blocks 4,5,6, depth 1, t=2", ps, sp, 1, 2, None),
        ("power set, blocks 4,5,6, depth 2, t=1", ps, sp, 2, 1, None),
        ("T_max(2,3,4), depth 1, t=1, B=2", tmax(make_spread((2, 3, 4))), make_spread((2, 3, 4)), 1, 1, 2),
        ("T_ort(2,3,4), depth 1, t=1, B=2", tort(make_spread((2, 3, 4))), make_spread((2, 3, 4)), 1, 1, 2),
        ("T_ort(2,3), depth 1, t=1", tort(make_spread((2, 3))), make_spread((2, 3)), 1, 1, None),
    ]
    for name, S, spread, depth, t, bound in cases:
        print(f"{name:40s} -> {describe(S, dichotomy_search(S, spread, depth, t, bound))}")

    g = sp.ground
    singles = [1 << i for i in range(9)]
    S = union_closure(singles, g)
    rs = refined_structure(S, singles)
    print(f"\nrefined structure on 9 singletons: schedule {rs.schedule}, block sizes {rs.size_note}, "
          f"T_max verified {rs.witness.complete}")


if __name__ == "__main__":
    main()
