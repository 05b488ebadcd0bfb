"""Colourings, shattering and the shatter-or-decide search on finite truncations.

Every "tends to infinity" condition is replaced by a :class:`Window`: a set of
block indices together with a threshold ``t`` that the relevant counts must
reach on each of those blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .canonical import CanonicalWitness, Spread, contains_canonical
from .setsystem import GroundSet, SetSystem, is_incompressible, join


@dataclass(frozen=True)
class Colouring:
    ground: GroundSet
    classes: tuple[int, ...]

    def __post_init__(self) -> None:
        classes = tuple(self.classes)
        object.__setattr__(self, "classes", classes)
        if not classes:
            raise ValueError("a colouring needs at least one class")
        seen = 0
        for c in classes:
            if c == 0:
                raise ValueError("colour classes must be non-empty")
            if c & seen:
                raise ValueError("colour classes must be disjoint")
            seen |= c
        if seen != self.ground.full:
            raise ValueError("colour classes must cover the ground set")

    @classmethod
    def trivial(cls, ground: GroundSet) -> Colouring:
        return cls(ground, (ground.full,))

    def __len__(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class Window:
    """Block indices (1-based, increasing) and a per-block threshold."""

    blocks: tuple[int, ...]
    t: int

    def __post_init__(self) -> None:
        blocks = tuple(sorted(set(self.blocks)))
        object.__setattr__(self, "blocks", blocks)
        if not blocks or blocks[0] < 1:
            raise ValueError("window needs block indices >= 1")
        if self.t < 1:
            raise ValueError("window threshold must be positive")

    @classmethod
    def span(cls, first: int, last: int, t: int) -> Window:
        if not 1 <= first <= last:
            raise ValueError("window needs 1 <= first <= last")
        return cls(tuple(range(first, last + 1)), t)

    @classmethod
    def parse(cls, text: str) -> Window:
        """``n0:N:t``"""
        try:
            first, last, t = (int(p) for p in text.split(":"))
        except ValueError:
            raise ValueError(f"window must look like n0:N:t, got {text!r}") from None
        return cls.span(first, last, t)

    @property
    def first(self) -> int:
        return self.blocks[0]

    @property
    def last(self) -> int:
        return self.blocks[-1]

    def check(self, spread: Spread) -> None:
        if self.last > len(spread):
            raise ValueError(f"window reaches block {self.last} of a {len(spread)}-block spread")

    def __str__(self) -> str:
        return f"blocks={','.join(map(str, self.blocks))} t={self.t}"


@dataclass(frozen=True)
class ShatterWitness:
    sequence: tuple[int, ...]
    window: Window
    cell_minima: tuple[int, ...]


@dataclass(frozen=True)
class DecisiveReport:
    colouring: Colouring
    decisive_class: int
    table: tuple[tuple[int, int], ...]
    max_statistic: int
    window: Window

    def decisive_at(self, bound: int) -> bool:
        return self.max_statistic <= bound


@dataclass(frozen=True)
class HalverWitness:
    member: int
    blocks: tuple[int, ...]


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    sequence: tuple[int, ...]
    window: Window
    rounds: int


# ---------------------------------------------------------------------------


def gamma_atoms(sets: Sequence[int], ground: GroundSet) -> Colouring:
    """Non-empty cells of the partition generated by ``sets`` and their complements.

    Cell ``code`` takes ``a_j`` when bit ``m-1-j`` of ``code`` is clear and its
    complement otherwise; cells appear in increasing ``code``.
    """
    m = len(sets)
    if m < 1:
        raise ValueError("need at least one set")
    return Colouring(ground, tuple(c for c in _cells(sets, ground.full) if c))


def _cells(sets: Sequence[int], full: int) -> list[int]:
    m = len(sets)
    out = []
    for code in range(1 << m):
        cell = full
        for j, a in enumerate(sets):
            cell &= (full & ~a) if code >> (m - 1 - j) & 1 else a
        out.append(cell)
    return out


def colours_spread(
    colouring: Colouring, spread: Spread, window: Window
) -> tuple[bool, tuple[int, int] | None]:
    """Every class meets every window block in at least ``t`` points; else first (class, block) failing."""
    window.check(spread)
    for ci, c in enumerate(colouring.classes):
        for n in window.blocks:
            if (c & spread.block(n)).bit_count() < window.t:
                return False, (ci, n)
    return True, None


def shatters(
    sequence: Sequence[int], spread: Spread, depth: int, window: Window
) -> tuple[bool, tuple[int, int, int]]:
    """Check every sign pattern of the first ``depth`` sets on the window.

    Returns the verdict and the worst cell as ``(code, block, count)``.
    """
    if len(sequence) < depth:
        raise ValueError("sequence shorter than the requested depth")
    window.check(spread)
    cells = _cells(sequence[:depth], spread.ground.full)
    worst = None
    for code, cell in enumerate(cells):
        for n in window.blocks:
            k = (cell & spread.block(n)).bit_count()
            if worst is None or k < worst[2]:
                worst = (code, n, k)
    return worst[2] >= window.t, worst


def member_statistic(
    x: int, spread: Spread, colouring: Colouring, c0: int, window: Window
) -> int:
    C0 = colouring.classes[c0]
    outside = spread.ground.full & ~x
    best = 0
    for n in window.blocks:
        E = spread.block(n)
        s = (x & C0 & E).bit_count()
        for C in colouring.classes:
            s = min(s, (outside & C & E).bit_count())
        best = max(best, s)
    return best


def decisive_statistic(
    S: SetSystem, spread: Spread, colouring: Colouring, c0: int, window: Window
) -> DecisiveReport:
    if not 0 <= c0 < len(colouring):
        raise ValueError("decisive class index out of range")
    window.check(spread)
    table = tuple(
        (x, member_statistic(x, spread, colouring, c0, window)) for x in S.members
    )
    top = max((s for _, s in table), default=0)
    return DecisiveReport(colouring, c0, table, top, window)


def halves(F: int, D: int, spread: Spread, window: Window) -> bool:
    window.check(spread)
    return all(
        (D & F & spread.block(n)).bit_count() >= window.t
        and (D & ~F & spread.block(n)).bit_count() >= window.t
        for n in window.blocks
    )


def _halving_blocks(y: int, colouring: Colouring, spread: Spread, window: Window) -> tuple[int, ...]:
    out = []
    for n in window.blocks:
        E = spread.block(n)
        if all(
            (C & y & E).bit_count() >= window.t and (C & ~y & E).bit_count() >= window.t
            for C in colouring.classes
        ):
            out.append(n)
    return tuple(out)


def find_halver(
    S: SetSystem, colouring: Colouring, spread: Spread, window: Window
) -> HalverWitness | None:
    """First member (in member order) halving every class on a strict majority of the window."""
    window.check(spread)
    need = len(window.blocks) // 2 + 1
    for y in S.members:
        kept = _halving_blocks(y, colouring, spread, window)
        if len(kept) >= need:
            return HalverWitness(y, kept)
    return None


def dichotomy_search(
    S: SetSystem,
    spread: Spread,
    depth: int,
    t: int,
    bound: int | None = None,
    window: Window | None = None,
) -> ShatterWitness | DecisiveReport | Inconclusive:
    """Alternate decisiveness checks and halver searches, starting from ``{ground}``.

    Each round first asks whether the current colouring is decisive at
    ``bound`` (skipped when ``bound`` is ``None`` or negative), then looks for a
    halver.  A halver is appended to the sequence, the window shrinks to the
    blocks it halves, and the colouring becomes the atoms of the sequence.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if window is None:
        window = Window.span(1, len(spread), t)
    window.check(spread)
    colouring = Colouring.trivial(spread.ground)
    sequence: list[int] = []
    rounds = 0
    while True:
        if bound is not None and bound >= 0:
            for c0 in range(len(colouring)):
                report = decisive_statistic(S, spread, colouring, c0, window)
                if report.decisive_at(bound):
                    return report
        ok, _ = colours_spread(colouring, spread, window)
        if not ok:
            return Inconclusive("colouring no longer colours the window", tuple(sequence), window, rounds)
        halver = find_halver(S, colouring, spread, window)
        rounds += 1
        if halver is None:
            why = "no halver found" if bound is None or bound < 0 else f"no halver found and no class decisive at bound {bound}"
            return Inconclusive(why, tuple(sequence), window, rounds)
        sequence.append(halver.member)
        window = Window(halver.blocks, t)
        if len(sequence) >= depth:
            ok, _ = shatters(sequence, spread, depth, window)
            if ok:
                minima = tuple(
                    min((cell & spread.block(n)).bit_count() for n in window.blocks)
                    for cell in _cells(sequence[:depth], spread.ground.full)
                )
                return ShatterWitness(tuple(sequence[:depth]), window, minima)
            return Inconclusive("sequence does not shatter at the requested depth", tuple(sequence), window, rounds)
        colouring = gamma_atoms(sequence, spread.ground)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RefinedStructure:
    spread: Spread
    schedule: tuple[int, ...]
    witness: CanonicalWitness
    transversal_members: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return self.spread.sizes

    @property
    def size_note(self) -> str:
        """Block sizes ``n_k - n_(k-1)`` as a comma-separated string."""
        s = (0, *self.schedule)
        return ",".join(str(s[k] - s[k - 1]) for k in range(1, len(s)))


def square_schedule(M: int) -> tuple[int, ...]:
    out = []
    k = 1
    while k * k <= M:
        out.append(k * k)
        k += 1
    return tuple(out)


def refined_structure(
    S: SetSystem, chain: Sequence[int], schedule: Sequence[int] | None = None
) -> RefinedStructure:
    """Extract a ``T_max`` spread from a sequence with incompressible prefixes.

    With ``d_k`` the union of the first ``n_k`` sets, block ``E_k`` takes, for
    each ``n_(k-1) < j <= n_k``, the lowest point of ``a_j - d_(k-1)`` lying in
    no other set of that batch.  The member ``a_j | d_(k-1)`` then has trace
    ``E_<k`` plus that single point.
    """
    chain = list(chain)
    M = len(chain)
    if M < 1:
        raise ValueError("chain must be non-empty")
    S.subfamily(chain)
    for k in range(1, M + 1):
        ok, _ = is_incompressible(chain[:k])
        if not ok:
            raise ValueError(f"prefix of length {k} is compressible")
    schedule = tuple(square_schedule(M) if schedule is None else schedule)
    if not schedule or any(b <= a for a, b in zip((0, *schedule), schedule)) or schedule[-1] > M:
        raise ValueError("schedule must be strictly increasing, positive and at most M")

    blocks = []
    makers: list[list[tuple[int, int]]] = []
    prev_n, d_prev = 0, 0
    for n_k in schedule:
        batch = [chain[j] & ~d_prev for j in range(prev_n, n_k)]
        block = 0
        level = []
        for pos, part in enumerate(batch):
            others = join((0, *batch[:pos], *batch[pos + 1 :]))
            private = part & ~others
            if not private:
                raise ValueError(f"set {prev_n + pos + 1} has no transversal point")
            omega = private & -private
            block |= omega
            level.append((omega, chain[prev_n + pos] | d_prev))
        blocks.append(block)
        makers.append(level)
        d_prev |= join(chain[prev_n:n_k])
        prev_n = n_k

    spread = Spread(S.ground, tuple(blocks), allow_shrinking=True)
    support = spread.support
    transversal: dict[tuple[int, int], int] = {}
    for k, level in enumerate(makers, 1):
        for omega, z in level:
            if z not in S:
                raise ValueError("constructed member is not in the system")
            if z & support != spread.below(k) | omega:
                raise AssertionError("trace equation fails for a constructed member")
            transversal[(k, omega)] = z
    witness = contains_canonical(S, spread, "tmax")
    return RefinedStructure(spread, schedule, witness, transversal)
