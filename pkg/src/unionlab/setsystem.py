"""Finite union-closed set systems over a labelled ground set.

Members are stored as Python ints used as bitsets: bit ``i`` is set when the
``i``-th ground point belongs to the member.  Every family keeps its members
sorted lexicographically by their index lists, so all outputs are
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_MEMBER_CAP = 1 << 20
DEFAULT_NODE_BUDGET = 10**7

_FORBIDDEN_LABEL_CHARS = set("#=")


class BudgetExceeded(RuntimeError):
    """A configured resource cap was hit before the computation finished."""


# ---------------------------------------------------------------------------
# bitset helpers


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def lex_key(mask: int) -> tuple[int, ...]:
    """Sort key realising the lexicographic order of index lists."""
    return indices_of(mask)


def sort_members(members: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(members), key=lex_key))


def maximal(family: Iterable[int]) -> list[int]:
    """Inclusion-maximal members of ``family`` (duplicates merged)."""
    kept: list[int] = []
    for x in sorted(set(family), key=lambda m: -m.bit_count()):
        if not any(x & ~k == 0 for k in kept):
            kept.append(x)
    return kept


# ---------------------------------------------------------------------------
# core types


@dataclass(frozen=True)
class GroundSet:
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError("ground set must have at least one point")
        if len(set(labels)) != len(labels):
            raise ValueError("ground labels must be pairwise distinct")
        for lab in labels:
            if not lab or any(c.isspace() or c in _FORBIDDEN_LABEL_CHARS for c in lab):
                raise ValueError(f"invalid ground label {lab!r}")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    @cached_property
    def position(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def mask(self, labels: Iterable[str]) -> int:
        try:
            return mask_of(self.position[lab] for lab in labels)
        except KeyError as exc:
            raise ValueError(f"unknown label {exc.args[0]!r}") from None

    def names(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in indices_of(mask))

    def show(self, mask: int) -> str:
        return "{" + ",".join(self.names(mask)) + "}"


@dataclass(frozen=True)
class SetSystem:
    """A duplicate-free family of members over ``ground``.

    ``closed`` is a cache of a known fact (set by closure constructors), not a
    request.  ``generators``, when present, is a family whose union-closure is
    exactly ``members``; it lets filters be computed without scanning.
    """

    ground: GroundSet
    members: tuple[int, ...]
    closed: bool = field(default=False, compare=False)
    generators: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if len(set(members)) != len(members):
            raise ValueError("set system members must be pairwise distinct")
        full = self.ground.full
        for m in members:
            if m < 0 or m & ~full:
                raise ValueError("member outside the ground set")

    @classmethod
    def of(
        cls,
        ground: GroundSet,
        members: Iterable[int],
        closed: bool = False,
        generators: Iterable[int] | None = None,
    ) -> SetSystem:
        gens = None if generators is None else sort_members(generators)
        return cls(ground, sort_members(members), closed, gens)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, member: object) -> bool:
        return member in self.member_set

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def position(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.members)}

    def subfamily(self, family: Iterable[int]) -> tuple[int, ...]:
        """``family`` re-ordered into member order; raises if not contained."""
        chosen = set(family)
        missing = chosen - self.member_set
        if missing:
            raise ValueError(
                f"{self.ground.show(min(missing, key=lex_key))} is not a member"
            )
        return tuple(sorted(chosen, key=self.position.__getitem__))

    def show(self) -> str:
        return "[" + ", ".join(self.ground.show(m) for m in self.members) + "]"


@dataclass(frozen=True)
class MultiplicationTable:
    """An abstract finite semilattice given by its product table."""

    n: int
    product: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        prod = tuple(tuple(row) for row in self.product)
        object.__setattr__(self, "product", prod)
        n = self.n
        if n < 1 or len(prod) != n or any(len(row) != n for row in prod):
            raise ValueError("product table must be n x n with n >= 1")
        for i in range(n):
            for j in range(n):
                if not 0 <= prod[i][j] < n:
                    raise ValueError(f"product[{i}][{j}] out of range")
                if prod[i][j] != prod[j][i]:
                    raise ValueError(f"table not commutative at ({i},{j})")
            if prod[i][i] != i:
                raise ValueError(f"element {i} is not idempotent")
        for i in range(n):
            for j in range(n):
                ij = prod[i][j]
                for k in range(n):
                    if prod[ij][k] != prod[i][prod[j][k]]:
                        raise ValueError(f"table not associative at ({i},{j},{k})")

    def divides(self, x: int, y: int) -> bool:
        return self.product[x][y] == y


# ---------------------------------------------------------------------------
# operations


def union_closure(
    generators: Iterable[int], ground: GroundSet, cap: int = DEFAULT_MEMBER_CAP
) -> SetSystem:
    """Smallest union-closed family containing ``generators``."""
    gens = sort_members(generators)
    if not gens:
        raise ValueError("union_closure needs at least one generator")
    full = ground.full
    if any(g & ~full for g in gens):
        raise ValueError("generator outside the ground set")
    seen = set(gens)
    if len(seen) > cap:
        raise BudgetExceeded(f"closure exceeds member cap {cap}")
    frontier = list(gens)
    while frontier:
        fresh = []
        for m in frontier:
            for g in gens:
                u = m | g
                if u not in seen:
                    seen.add(u)
                    fresh.append(u)
        if len(seen) > cap:
            raise BudgetExceeded(f"closure exceeds member cap {cap}")
        frontier = fresh
    return SetSystem.of(ground, seen, closed=True, generators=gens)


def is_union_closed(family: SetSystem) -> tuple[bool, tuple[int, int] | None]:
    members = family.members
    present = family.member_set
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            if a | b not in present:
                return False, (a, b)
    return True, None


def divides(a: int, b: int) -> bool:
    """``a | b`` in the semilattice sense, i.e. ``a`` is a subset of ``b``."""
    return a | b == b


def join(family: Iterable[int]) -> int:
    it = iter(family)
    try:
        out = next(it)
    except StopIteration:
        raise ValueError("join of an empty family is undefined") from None
    for m in it:
        out |= m
    return out


def filter_generated(E: Iterable[int], S: SetSystem) -> SetSystem:
    """The filter of ``S`` generated by ``E`` (empty family when ``E`` is)."""
    E = S.subfamily(E)
    if not E:
        return SetSystem(S.ground, (), closed=True)
    top = join(E)
    if S.generators is not None:
        below = [g for g in S.generators if g & ~top == 0]
        return union_closure(below, S.ground, cap=max(len(S), 1))
    return SetSystem(
        S.ground, tuple(z for z in S.members if z & ~top == 0), closed=S.closed
    )


def is_incompressible(family: Sequence[int]) -> tuple[bool, int | None]:
    """Single-drop test; the witness is the first member whose removal keeps the join."""
    family = list(family)
    if not family:
        raise ValueError("incompressibility is defined for non-empty families")
    if len(set(family)) != len(family):
        raise ValueError("family contains duplicate members")
    n = len(family)
    if n == 1:
        # no non-empty proper subfamily exists
        return True, None
    # prefix/suffix unions give each "join of the others" in O(n)
    prefix = [0] * (n + 1)
    suffix = [0] * (n + 1)
    for i, m in enumerate(family):
        prefix[i + 1] = prefix[i] | m
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | family[i]
    for i, m in enumerate(family):
        if m & ~(prefix[i] | suffix[i + 1]) == 0:
            return False, m
    return True, None


@dataclass(frozen=True)
class BreadthResult:
    value: int
    exact: bool
    family: tuple[int, ...]
    nodes: int

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">= {self.value}"


def breadth(S: SetSystem, node_budget: int = DEFAULT_NODE_BUDGET) -> BreadthResult:
    """Largest incompressible subfamily, by branch and bound.

    A partial family is only extended while every chosen member keeps a
    private point; the number of points of ``join(S)`` bounds the answer.
    """
    members = S.members
    if not members:
        raise ValueError("breadth of an empty system")
    ceiling = join(members).bit_count()
    best: list[int] = [members[0]]
    nodes = 0
    exhausted = False

    def extend(start: int, chosen: list[int], privates: list[int], cover: int) -> bool:
        nonlocal best, nodes, exhausted
        if len(chosen) > len(best):
            best = list(chosen)
            if len(best) >= ceiling:
                return True
        for idx in range(start, len(members)):
            if len(chosen) + (len(members) - idx) <= len(best):
                return False
            nodes += 1
            if nodes > node_budget:
                exhausted = True
                return True
            c = members[idx]
            if c & ~cover == 0:
                continue
            new_priv = [p & ~c for p in privates]
            if any(p == 0 for p in new_priv):
                continue
            chosen.append(c)
            new_priv.append(c & ~cover)
            done = extend(idx + 1, chosen, new_priv, cover | c)
            chosen.pop()
            if done:
                return True
        return False

    extend(0, [], [], 0)
    return BreadthResult(len(best), not exhausted, tuple(best), nodes)


def multiplication_table(S: SetSystem) -> MultiplicationTable:
    """Abstract table of a union-closed system, indexed by member order."""
    pos = S.position
    try:
        rows = tuple(tuple(pos[a | b] for b in S.members) for a in S.members)
    except KeyError:
        raise ValueError("system is not union-closed") from None
    return MultiplicationTable(len(S), rows)


def cayley_embedding(
    table: MultiplicationTable, labels: Sequence[str] | None = None
) -> tuple[SetSystem, tuple[int, ...]]:
    """Represent ``table`` as a union-closed system via x -> S minus multiples of x.

    Returns the image system and the element-to-member map.
    """
    n = table.n
    if labels is None:
        labels = [f"e{i}" for i in range(n)]
    ground = GroundSet(tuple(labels))
    images = tuple(
        mask_of(y for y in range(n) if not table.divides(x, y)) for x in range(n)
    )
    if len(set(images)) != n:
        raise ValueError("Cayley map is not injective; table is inconsistent")
    for x in range(n):
        for y in range(n):
            if images[x] | images[y] != images[table.product[x][y]]:
                raise ValueError("Cayley map is not a homomorphism")
    return SetSystem.of(ground, images, closed=True), images
