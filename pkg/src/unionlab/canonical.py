"""Spreads, the three canonical systems built on them, and their weights."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .propagation import LogWeight, VValue, v_value, v_value_symmetric
from .setsystem import (
    DEFAULT_MEMBER_CAP,
    BudgetExceeded,
    GroundSet,
    SetSystem,
    indices_of,
    join,
    mask_of,
)

KINDS = ("tmax", "tmin", "tort")


@dataclass(frozen=True)
class Spread:
    """Pairwise disjoint non-empty blocks ``E_1 .. E_N`` (stored 0-based)."""

    ground: GroundSet
    blocks: tuple[int, ...]
    allow_shrinking: bool = False

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise ValueError("a spread needs at least one block")
        seen = 0
        for b in blocks:
            if b == 0:
                raise ValueError("spread blocks must be non-empty")
            if b & seen:
                raise ValueError("spread blocks must be pairwise disjoint")
            if b & ~self.ground.full:
                raise ValueError("spread block outside the ground set")
            seen |= b
        sizes = self.sizes
        if not self.allow_shrinking and any(a > b for a, b in zip(sizes, sizes[1:])):
            raise ValueError(f"block sizes {sizes} decrease; pass allow_shrinking=True")

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b.bit_count() for b in self.blocks)

    @property
    def support(self) -> int:
        return join(self.blocks)

    def block(self, n: int) -> int:
        """Block ``E_n`` with 1-based ``n``."""
        return self.blocks[n - 1]

    def below(self, n: int) -> int:
        return join((0, *self.blocks[: n - 1]))

    def above(self, n: int) -> int:
        return join((0, *self.blocks[n:]))


@dataclass(frozen=True)
class CanonicalWitness:
    """Members of a system realising the traces of a canonical system.

    ``members`` maps ``(level, a)`` to a member whose trace on the spread's
    support is the canonical member built from ``a``.  ``missing`` holds the
    first trace with no preimage, if any.
    """

    kind: str
    spread: Spread
    members: Mapping[tuple[int, int], int] = field(default_factory=dict)
    missing: tuple[int, int] | None = None

    @property
    def complete(self) -> bool:
        return self.missing is None


def make_spread(
    sizes: Sequence[int] | None = None,
    ground: GroundSet | None = None,
    levels: int | None = None,
) -> Spread:
    """Consecutive blocks of the requested sizes, default ``2, 3, .., N+1``."""
    if sizes is None:
        sizes = [n + 1 for n in range(1, (levels or 2) + 1)]
    sizes = list(sizes)
    if any(s < 1 for s in sizes):
        raise ValueError("block sizes must be positive")
    if ground is None:
        ground = GroundSet(
            tuple(f"e{n}_{j}" for n, s in enumerate(sizes, 1) for j in range(1, s + 1))
        )
    if sum(sizes) > ground.size:
        raise ValueError(f"ground has {ground.size} points, blocks need {sum(sizes)}")
    blocks, start = [], 0
    for s in sizes:
        blocks.append(mask_of(range(start, start + s)))
        start += s
    return Spread(ground, tuple(blocks))


def refine(
    spread: Spread, selection: Sequence[tuple[int, int]], allow_shrinking: bool = False
) -> Spread:
    """Spread whose j-th block is the chosen subset of block ``n(j)`` (1-based)."""
    used = [n for n, _ in selection]
    if len(set(used)) != len(used):
        raise ValueError("a refinement may use each block at most once")
    blocks = []
    for n, subset in selection:
        if not 1 <= n <= len(spread):
            raise ValueError(f"block index {n} out of range")
        if subset == 0:
            raise ValueError("refinement blocks must be non-empty")
        if subset & ~spread.block(n):
            raise ValueError(f"chosen subset is not inside block {n}")
        blocks.append(subset)
    return Spread(spread.ground, tuple(blocks), allow_shrinking)


def _subsets(mask: int):
    """Non-empty submasks of ``mask`` in increasing numeric order."""
    bits = indices_of(mask)
    for code in range(1, 1 << len(bits)):
        yield mask_of(bits[i] for i in range(len(bits)) if code >> i & 1)


def canonical_traces(spread: Spread, kind: str):
    """Yield ``(level, a, member)`` for every member of the canonical system."""
    if kind not in KINDS:
        raise ValueError(f"unknown canonical kind {kind!r}")
    for n in range(1, len(spread) + 1):
        low = spread.below(n) if kind in ("tmax", "tort") else 0
        high = spread.above(n) if kind in ("tmin", "tort") else 0
        for a in _subsets(spread.block(n)):
            yield n, a, low | a | high


def canonical_system(spread: Spread, kind: str) -> SetSystem:
    return SetSystem.of(
        spread.ground, (m for _, _, m in canonical_traces(spread, kind)), closed=True
    )


def tmax(spread: Spread) -> SetSystem:
    return canonical_system(spread, "tmax")


def tmin(spread: Spread) -> SetSystem:
    return canonical_system(spread, "tmin")


def tort(spread: Spread) -> SetSystem:
    return canonical_system(spread, "tort")


def power_set_system(ground: GroundSet, support: int, cap: int = DEFAULT_MEMBER_CAP) -> SetSystem:
    """Every subset of ``support`` (the empty set included)."""
    bits = indices_of(support)
    if 1 << len(bits) > cap:
        raise BudgetExceeded(f"power set of {len(bits)} points exceeds cap {cap}")
    members = [0] + list(_subsets(support))
    return SetSystem.of(ground, members, closed=True)


def restrict(S: SetSystem, J: int) -> tuple[SetSystem, dict[int, int]]:
    """Trace system ``{x & J}`` and a back-map to the first preimage in member order."""
    back: dict[int, int] = {}
    for x in S.members:
        back.setdefault(x & J, x)
    gens = None if S.generators is None else [g & J for g in S.generators]
    traces = SetSystem.of(S.ground, back, closed=S.closed, generators=gens)
    return traces, back


def contains_canonical(S: SetSystem, spread: Spread, kind: str) -> CanonicalWitness:
    """Search ``S`` for an exact preimage of every canonical trace."""
    _, back = restrict(S, spread.support)
    found: dict[tuple[int, int], int] = {}
    for n, a, trace in canonical_traces(spread, kind):
        if trace not in back:
            return CanonicalWitness(kind, spread, found, (n, a))
        found[(n, a)] = back[trace]
    return CanonicalWitness(kind, spread, found)


# ---------------------------------------------------------------------------
# weights that break 1-propagation


def tmax_weight_value(spread: Spread, x: int) -> int:
    """Partial count in the highest block met; zero when no block is met or that block is full."""
    for b in reversed(spread.blocks):
        if x & b:
            return 0 if x & b == b else (x & b).bit_count()
    return 0


def tmin_weight_value(spread: Spread, x: int) -> int:
    """Partial count in the lowest block met; zero when no block is met or that block is full."""
    for b in spread.blocks:
        if x & b:
            return 0 if x & b == b else (x & b).bit_count()
    return 0


_WEIGHT_VALUE = {"tmax": tmax_weight_value, "tmin": tmin_weight_value}


def _canonical_weight(spread: Spread, kind: str, host: SetSystem | None) -> LogWeight:
    if host is None:
        host = power_set_system(spread.ground, spread.support)
    fn = _WEIGHT_VALUE[kind]
    return LogWeight.from_function(host, lambda x: fn(spread, x))


def weight_tmax(spread: Spread, host: SetSystem | None = None) -> LogWeight:
    """Weight defeating the ``T_max`` case; hosted on the power set of the support by default."""
    return _canonical_weight(spread, "tmax", host)


def weight_tmin(spread: Spread, host: SetSystem | None = None) -> LogWeight:
    return _canonical_weight(spread, "tmin", host)


@dataclass(frozen=True)
class LevelRow:
    n: int
    block_size: int
    lambda_a: tuple[Fraction, ...]
    lambda_b: Fraction
    v_exact: VValue
    bound: Fraction

    @property
    def passed(self) -> bool:
        return (
            all(v == 1 for v in self.lambda_a)
            and self.lambda_b == 0
            and self.v_exact >= VValue(True, self.bound)
        )


def level_family(spread: Spread, kind: str, n: int) -> list[int]:
    """Members of the canonical system meeting ``E_n`` in a single point."""
    low = spread.below(n) if kind in ("tmax", "tort") else 0
    high = spread.above(n) if kind in ("tmin", "tort") else 0
    return [low | 1 << i | high for i in indices_of(spread.block(n))]


def verify_level_one_failure(
    kind: str,
    levels: int,
    engine: str = "profile",
    cap: int = DEFAULT_MEMBER_CAP,
) -> list[LevelRow]:
    """Rows ``n = 2..levels`` on the spread with ``|E_n| = n + 1``.

    ``engine="profile"`` runs the block-symmetric exact search; ``"explicit"``
    builds the power set under ``b_n`` and runs the plain FBP closure.
    """
    if kind not in _WEIGHT_VALUE:
        raise ValueError("level-one failure is defined for tmax and tmin")
    if levels < 2:
        raise ValueError("need at least two levels")
    spread = make_spread(levels=levels)
    system = canonical_system(spread, kind)
    fn = _WEIGHT_VALUE[kind]
    rows = []
    for n in range(2, levels + 1):
        F = level_family(spread, kind, n)
        missing = [a for a in F if a not in system]
        if missing:
            raise AssertionError("level family is not inside the canonical system")
        b = join(F)
        lam_a = tuple(Fraction(fn(spread, a)) for a in F)
        lam_b = Fraction(fn(spread, b))
        if engine == "profile":
            v = v_value_symmetric(spread.blocks, lambda x: fn(spread, x), F, b)
        elif engine == "explicit":
            host = power_set_system(spread.ground, b, cap=cap)
            weight = LogWeight.from_function(host, lambda x: fn(spread, x))
            v = v_value(F, b, weight)
        else:
            raise ValueError(f"unknown engine {engine!r}")
        bound = Fraction(spread.block(n).bit_count(), 2)
        rows.append(LevelRow(n, spread.block(n).bit_count(), lam_a, lam_b, v, bound))
    return rows


def transfer_tmax(
    witness: CanonicalWitness, correspondence: Mapping[int, int], second: SetSystem
) -> Spread:
    """Move a ``T_max`` containment to another representation of the same semilattice.

    ``correspondence`` sends members of the first system to the matching
    members of ``second``.  For each level ``n`` and point ``j`` of ``E_n`` the
    lowest point of the image of the singleton-trace witness that avoids the
    images of every lower-level witness and every other level-``n`` witness is
    picked; these points form the new blocks.
    """
    if witness.kind != "tmax" or not witness.complete:
        raise ValueError("need a complete tmax witness")
    spread = witness.spread
    images: list[list[int]] = []
    for n in range(1, len(spread) + 1):
        row = []
        for i in indices_of(spread.block(n)):
            x = witness.members[(n, 1 << i)]
            if x not in correspondence:
                raise ValueError("correspondence misses a witness member")
            row.append(correspondence[x])
        images.append(row)
    new_blocks = []
    lower = 0
    for row in images:
        block = 0
        for j, img in enumerate(row):
            others = lower
            for k, other in enumerate(row):
                if k != j:
                    others |= other
            eligible = img & ~others
            if not eligible:
                raise ValueError("no eligible point; witness and representations disagree")
            block |= eligible & -eligible
        new_blocks.append(block)
        for img in row:
            lower |= img
    out = Spread(second.ground, tuple(new_blocks), spread.allow_shrinking)
    check = contains_canonical(second, out, "tmax")
    if not check.complete:
        raise ValueError("transferred spread fails tmax re-verification")
    return out
