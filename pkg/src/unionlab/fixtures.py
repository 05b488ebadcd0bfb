"""Concrete example semilattices at finite truncation.

Two families live here: a pair of abstractly isomorphic systems whose traces
on a spread behave differently, and the tile systems built from column pairs
``x_j`` and square tiles ``a_n`` on a three-row grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .canonical import Spread, restrict
from .propagation import (
    LogWeight,
    PropagationReport,
    VValue,
    fbp_step,
    propagation_constant,
    v_value,
)
from .setsystem import (
    DEFAULT_MEMBER_CAP,
    GroundSet,
    SetSystem,
    filter_generated,
    is_incompressible,
    is_union_closed,
    join,
    mask_of,
    multiplication_table,
    union_closure,
)


# ---------------------------------------------------------------------------
# two representations of one semilattice


@dataclass(frozen=True)
class TwoRepresentations:
    N: int
    M: int
    spread: Spread
    tmin_spread: Spread
    S: SetSystem
    S_prime: SetSystem
    # (a, level, m, member of S, member of S') per abstract element
    pairs: tuple[tuple[int, int, int, int, int], ...]

    def correspondence(self) -> dict[int, int]:
        return {x: y for _, _, _, x, y in self.pairs}

    def decode(self, x: int) -> tuple[int, int, int]:
        """``(a, level, m)`` of a member of ``S``."""
        for a, level, m, s, _ in self.pairs:
            if s == x:
                return a, level, m
        raise ValueError("not a member of S")


def _tmin_by_level(spread: Spread):
    for n in range(1, len(spread) + 1):
        high = spread.above(n)
        block = spread.block(n)
        sub = block
        subs = []
        while sub:
            subs.append(sub)
            sub = (sub - 1) & block
        for a in sorted(subs):
            yield n, a | high


def example_2_13(N: int, M: int) -> TwoRepresentations:
    """Triangular spread ``E_n = {(n,k) : k <= n}`` with a counter of length ``M``.

    ``S`` holds ``a + {m1..m<m>}`` and ``S'`` holds ``a x {1..M+1}`` plus the
    first ``m`` full columns, for ``T_min`` members ``a`` of level at least 2
    and ``level <= m <= M``.  The extra column ``M+1`` keeps ``a`` visible when
    ``m = M``, so the two systems stay in bijection.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    if M < N:
        raise ValueError("need M >= N so every level has a counter value")
    omega0 = [f"({n},{k})" for n in range(1, N + 1) for k in range(1, n + 1)]
    counter = [f"m{m}" for m in range(1, M + 1)]
    ground = GroundSet(tuple(omega0 + counter))
    p = len(omega0)
    blocks, start = [], 0
    for n in range(1, N + 1):
        blocks.append(mask_of(range(start, start + n)))
        start += n
    spread = Spread(ground, tuple(blocks))

    cols = M + 1
    ground_p = GroundSet(
        tuple(f"{lab}@{c}" for c in range(1, cols + 1) for lab in omega0)
    )

    def lift(a: int, columns: Sequence[int]) -> int:
        out = 0
        for c in columns:
            out |= a << (p * (c - 1))
        return out

    full0 = (1 << p) - 1
    pairs = []
    for level, a in _tmin_by_level(spread):
        if level < 2:
            continue
        for m in range(level, M + 1):
            x = a | mask_of(range(p, p + m))
            y = lift(a, range(1, cols + 1)) | lift(full0, range(1, m + 1))
            pairs.append((a, level, m, x, y))
    S = SetSystem.of(ground, (r[3] for r in pairs), closed=True)
    S_prime = SetSystem.of(ground_p, (r[4] for r in pairs), closed=True)
    if len(S) != len(pairs) or len(S_prime) != len(pairs):
        raise AssertionError("representation is not injective")
    for system in (S, S_prime):
        ok, bad = is_union_closed(system)
        if not ok:
            raise AssertionError("truncated system is not union-closed")
    tmin_spread = Spread(ground, tuple(blocks[1:]))
    return TwoRepresentations(N, M, spread, tmin_spread, S, S_prime, tuple(pairs))


def same_table(first: SetSystem, second: SetSystem, correspondence: dict[int, int]) -> bool:
    """Whether ``correspondence`` carries unions of ``first`` to unions of ``second``."""
    if sorted(correspondence) != sorted(first.members):
        return False
    if sorted(correspondence.values()) != sorted(second.members):
        return False
    t1 = multiplication_table(first)
    t2 = multiplication_table(second)
    relabel = [second.position[correspondence[x]] for x in first.members]
    return all(
        relabel[t1.product[i][j]] == t2.product[relabel[i]][relabel[j]]
        for i in range(t1.n)
        for j in range(t1.n)
    )


# ---------------------------------------------------------------------------
# tile systems


def tile_columns(n: int) -> range:
    return range(n * n, (n + 1) * (n + 1))


@dataclass(frozen=True)
class Section6Bundle:
    J: int
    r_columns: int
    ground: GroundSet
    x: tuple[int, ...]
    a: tuple[int, ...]
    g: tuple[int, ...]
    b: tuple[int, ...]
    partial_tiles: tuple[int, ...]
    S: SetSystem
    T: SetSystem
    R: SetSystem
    weight_S: LogWeight
    weight_T: LogWeight
    weight_R: LogWeight

    def point(self, row: int, col: int) -> int:
        return 1 << (row * self.J + col - 1)

    @property
    def q_mask(self) -> int:
        """Points of rows 1 and 2."""
        return mask_of(range(self.J, 3 * self.J))

    def q(self, z: int) -> int:
        return z & self.q_mask

    def tile_family(self, n: int) -> tuple[int, ...]:
        """``x_k`` for ``k`` in the ``n``-th tile."""
        cols = tile_columns(n)
        if cols[-1] > self.J:
            raise ValueError(f"tile {n} needs {cols[-1]} columns, have {self.J}")
        return tuple(self.x[k - 1] for k in cols)


def lambda_star(z: int, J: int) -> int:
    """Number of row-2 points of ``z``."""
    return (z >> (2 * J) & ((1 << J) - 1)).bit_count()


def section6_build(
    J: int,
    r_columns: int | None = None,
    partial: bool = False,
    cap: int = DEFAULT_MEMBER_CAP,
) -> Section6Bundle:
    """Tile systems on ``{0,1,2} x {1..J}``.

    Only tiles that fit in ``J`` columns are used unless ``partial`` is set.
    ``R`` has ``3**r_columns - 1`` members, so it is built on the first
    ``r_columns`` columns (default ``min(J, 8)``).
    """
    if J < 8:
        raise ValueError("need J >= 8 so that the first two tiles fit")
    if r_columns is None:
        r_columns = min(J, 8)
    if not 1 <= r_columns <= J:
        raise ValueError("r_columns must lie in 1..J")
    ground = GroundSet(tuple(f"({r},{c})" for r in range(3) for c in range(1, J + 1)))

    def pt(r: int, c: int) -> int:
        return 1 << (r * J + c - 1)

    x = tuple(pt(1, j) | pt(2, j) for j in range(1, J + 1))
    g = tuple(pt(1, j) for j in range(1, J + 1))
    a, partial_tiles = [], []
    n = 1
    while n * n <= J:
        cols = [k for k in tile_columns(n) if k <= J]
        if cols[-1] != (n + 1) ** 2 - 1:
            if not partial:
                break
            partial_tiles.append(n)
        a.append(join(pt(0, k) | pt(1, k) for k in cols))
        n += 1
    a = tuple(a)
    b = tuple(t & mask_of(range(J, 3 * J)) for t in a)

    S = union_closure(a + x, ground, cap=cap)
    T, _ = restrict(S, mask_of(range(J, 3 * J)))
    R = union_closure(x[:r_columns] + g[:r_columns], ground, cap=cap)
    lam = lambda z: lambda_star(z, J)
    return Section6Bundle(
        J,
        r_columns,
        ground,
        x,
        a,
        g,
        b,
        tuple(partial_tiles),
        S,
        T,
        R,
        LogWeight.from_function(S, lam),
        LogWeight.from_function(T, lam),
        LogWeight.from_function(R, lam),
    )


def factors_below(z: int, generators: Sequence[int]) -> tuple[int, ...]:
    return tuple(gen for gen in generators if gen & ~z == 0)


def unique_factorization(z: int, generators: Sequence[int]) -> tuple[int, ...] | None:
    """The only set of generators with union ``z``, or ``None`` when there are zero or several.

    A covering set exists iff the generators below ``z`` cover it, and it is
    unique iff each of those generators has a point no other one covers.
    """
    below = factors_below(z, generators)
    if not below or join(below) != z:
        return None
    ok, _ = is_incompressible(below)
    return below if ok else None


def x_factor_count(z: int, bundle: Section6Bundle) -> int:
    found = unique_factorization(z, bundle.a + bundle.x)
    if found is None:
        raise ValueError("member has no unique factorization")
    return sum(1 for f in found if f in bundle.x)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class ContainmentCheck:
    n: int
    C: Fraction
    holds: bool
    offending: int | None
    steps: int


def generated_by(z: int, family: Sequence[int]) -> bool:
    """Whether ``z`` is a union of members of ``family``."""
    below = [f for f in family if f & ~z == 0]
    return bool(below) and join(below) == z


def verify_lemma_6_1(
    bundle: Section6Bundle, n: int, C, allow_outside_hypothesis: bool = False
) -> ContainmentCheck:
    """Follow ``FBP_C^m(E_n)`` in ``T`` and check every iterate stays in ``<E_n>``."""
    C = Fraction(C)
    if not allow_outside_hypothesis and not 1 <= C <= n:
        raise ValueError(f"need 1 <= C <= n, got C={C}, n={n}")
    En = bundle.tile_family(n)
    weight = bundle.weight_T
    host = filter_generated(En, bundle.T)
    current = tuple(x for x in host.subfamily(En) if weight(x) <= C)
    steps = 0
    while True:
        for z in current:
            if not generated_by(z, En):
                return ContainmentCheck(n, C, False, z, steps)
        nxt = fbp_step(current, C, weight, host) if current else ()
        if nxt == current:
            return ContainmentCheck(n, C, True, None, steps)
        current = nxt
        steps += 1


@dataclass(frozen=True)
class BoundRow:
    n: int
    lambda_b: Fraction
    family_in_level_one: bool
    v_exact: VValue
    bound: Fraction

    @property
    def passed(self) -> bool:
        return (
            self.lambda_b == 0
            and self.family_in_level_one
            and self.v_exact >= VValue(True, self.bound)
        )


def verify_section6_bounds(bundle: Section6Bundle, n: int) -> BoundRow:
    En = bundle.tile_family(n)
    b = bundle.b[n - 1]
    weight = bundle.weight_T
    v = v_value(En, b, weight)
    return BoundRow(
        n,
        weight(b),
        all(weight(x) <= 1 for x in En),
        v,
        Fraction(n),
    )


def verify_L_propagation(
    bundle: Section6Bundle,
    which: str,
    L,
    max_size: int = 4,
    max_families: int = 10**6,
) -> PropagationReport:
    if which == "S":
        weight = bundle.weight_S
    elif which == "R":
        weight = bundle.weight_R
    else:
        raise ValueError("which must be 'S' or 'R'")
    return propagation_constant(weight, L, max_size=max_size, max_families=max_families)
