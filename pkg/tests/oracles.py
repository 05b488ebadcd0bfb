"""Slow, direct reference implementations used to cross-check the library.

Nothing here imports the algorithms under test; only plain ints and
fractions are used.
"""

from fractions import Fraction
from itertools import combinations

INF = None  # stands for an infinite V


def subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def union(family):
    out = 0
    for m in family:
        out |= m
    return out


def brute_closure(gens):
    """All unions of non-empty subfamilies of ``gens``."""
    return {union(c) for c in subsets(gens) if c}


def filter_fixpoint(E, members):
    """Smallest filter containing E: add pairwise unions and members below present ones."""
    members = set(members)
    cur = set(E)
    if not cur:
        return set()
    while True:
        nxt = set(cur)
        for a in cur:
            for b in cur:
                nxt.add(a | b)
        for z in members:
            if any(z | w == w for w in cur):
                nxt.add(z)
        if nxt == cur:
            return cur
        cur = nxt


def brute_incompressible(family):
    family = list(family)
    top = union(family)
    for c in subsets(family):
        if len(c) < len(family) and c and union(c) == top:
            return False
    return len(family) > 0


def brute_breadth(members):
    best = 0
    for c in subsets(members):
        if c and len(c) > best and brute_incompressible(c):
            best = len(c)
    return best


def fbp_closure(E, C, w, members):
    """Plain least fixpoint of the FBP step, checking every pair."""
    level = [z for z in members if w[z] <= C]
    cur = {x for x in E if w[x] <= C}
    while True:
        nxt = {z for z in level if any(z | x | y == x | y for x in cur for y in cur)}
        if nxt == cur:
            return cur
        cur = nxt


def v_value(E, z, w, members):
    """V over the whole system: None when z is not below join(E)."""
    if not E or z & ~union(E):
        return INF
    for C in sorted({Fraction(0)} | set(w.values())):
        if z in fbp_closure(E, C, w, members):
            return C
    raise AssertionError("unreachable")


def first_subadditivity_violation(w, members):
    ms = set(members)
    for x in members:
        for y in members:
            if (x | y) in ms and w[x | y] > w[x] + w[y]:
                return x, y
    return None


def count_factorizations(z, gens):
    """Number of subsets of ``gens`` with union exactly ``z``."""
    below = [g for g in gens if g & ~z == 0]
    return sum(1 for c in subsets(below) if c and union(c) == z)


def cayley_images(product):
    n = len(product)
    return [sum(1 << y for y in range(n) if product[x][y] != y) for x in range(n)]
