"""Log-weights built from a decisive colour class, and the T_ort level failure."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .canonical import LevelRow, Spread, tort
from .dichotomy import Colouring
from .propagation import LogWeight, v_value
from .setsystem import SetSystem, indices_of, join


@dataclass(frozen=True)
class TSet:
    member: int
    blocks: tuple[int, ...]


def t_set(x: int, spread: Spread, colouring: Colouring) -> TSet:
    """Blocks ``n`` on which ``x`` holds at most half of every class (1-based)."""
    out = []
    for n in range(1, len(spread) + 1):
        E = spread.block(n)
        # 2|x & C & E| <= |C & E| is the exact form of the half-threshold
        if all(2 * (x & C & E).bit_count() <= (C & E).bit_count() for C in colouring.classes):
            out.append(n)
    return TSet(x, tuple(out))


def colouring_weight_value(x: int, spread: Spread, colouring: Colouring, c0: int) -> int:
    C0 = colouring.classes[c0]
    return max(
        ((x & C0 & spread.block(n)).bit_count() for n in t_set(x, spread, colouring).blocks),
        default=0,
    )


def weight_from_colouring(
    S: SetSystem, spread: Spread, colouring: Colouring, c0: int
) -> LogWeight:
    if not 0 <= c0 < len(colouring):
        raise ValueError("class index out of range")
    if colouring.ground != spread.ground:
        raise ValueError("colouring and spread live on different ground sets")
    return LogWeight.from_function(
        S, lambda x: colouring_weight_value(x, spread, colouring, c0)
    )


def tort_level_family(spread: Spread, C0: int, n: int) -> list[int]:
    """``T_ort`` members whose level-``n`` part is a single point of ``C0``."""
    rest = spread.below(n) | spread.above(n)
    return [rest | 1 << i for i in indices_of(spread.block(n) & C0)]


def verify_tort_failure(
    spread: Spread,
    colouring: Colouring | None = None,
    c0: int = 0,
    levels: tuple[int, ...] | None = None,
) -> list[LevelRow]:
    """One row per level with ``b_n``, the exact ``V`` and the bound ``|C0 & E_n| / 4``.

    Levels default to every ``n`` from the first with ``|C0 & E_n| >= 2`` on.
    """
    if colouring is None:
        colouring = Colouring.trivial(spread.ground)
    for ci, C in enumerate(colouring.classes):
        for n in range(1, len(spread) + 1):
            if not C & spread.block(n):
                raise ValueError(f"class {ci} misses block {n}; the colouring does not colour the spread")
    C0 = colouring.classes[c0]
    if levels is None:
        start = next(
            (n for n in range(1, len(spread) + 1) if (C0 & spread.block(n)).bit_count() >= 2),
            None,
        )
        if start is None:
            raise ValueError("no level has two points of the chosen class")
        levels = tuple(range(start, len(spread) + 1))
    S = tort(spread)
    weight = weight_from_colouring(S, spread, colouring, c0)
    rows = []
    for n in levels:
        M = (C0 & spread.block(n)).bit_count()
        if M < 2:
            raise ValueError(f"level {n} has fewer than two points of the chosen class")
        F = tort_level_family(spread, C0, n)
        b = join(F)
        v = v_value(F, b, weight)
        rows.append(
            LevelRow(
                n,
                spread.block(n).bit_count(),
                tuple(weight(x) for x in F),
                weight(b),
                v,
                Fraction(M, 4),
            )
        )
    return rows
