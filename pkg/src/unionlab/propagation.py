"""Log-weights, FBP iteration and exact propagation values.

All weights are exact rationals.  ``V_E(z)`` is an infimum over real levels
``C``, but membership of ``z`` in the FBP closure only changes when ``C``
crosses a weight value, so the minimum over ``{0} | {weight values}`` is exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .setsystem import SetSystem, filter_generated, join, maximal

Rational = Fraction | int


@dataclass(frozen=True)
class LogWeight:
    system: SetSystem
    values: Mapping[int, Fraction]

    def __post_init__(self) -> None:
        vals = {m: Fraction(v) for m, v in self.values.items()}
        for m in self.system.members:
            if m not in vals:
                raise ValueError(
                    f"weight undefined on member {self.system.ground.show(m)}"
                )
            if vals[m] < 0:
                raise ValueError(
                    f"negative weight on member {self.system.ground.show(m)}"
                )
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, system: SetSystem, fn: Callable[[int], Rational]) -> LogWeight:
        return cls(system, {m: Fraction(fn(m)) for m in system.members})

    def __call__(self, member: int) -> Fraction:
        return self.values[member]

    def on(self, system: SetSystem) -> LogWeight:
        """The same values restricted to a subsystem."""
        return LogWeight(system, {m: self.values[m] for m in system.members})

    @cached_property
    def max_value(self) -> Fraction:
        return max(self.values.values(), default=Fraction(0))


@total_ordering
@dataclass(frozen=True)
class VValue:
    finite: bool
    value: Fraction = Fraction(0)

    @classmethod
    def infinite(cls) -> VValue:
        return cls(False)

    def _key(self):
        return (not self.finite, self.value if self.finite else Fraction(0))

    def __lt__(self, other: VValue) -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        return fmt_rational(self.value) if self.finite else "infinite"


def fmt_rational(q: Rational) -> str:
    """Exact decimal when the denominator allows it, else ``p/q``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = 0
    while (q * 10**digits).denominator != 1:
        digits += 1
    scaled = q * 10**digits
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled.numerator), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


# ---------------------------------------------------------------------------
# weight legality and level sets


def _integer_scale(values: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in values], den


def check_log_weight(weight: LogWeight) -> tuple[int, int] | None:
    """First pair (in member order) violating subadditivity, or ``None``.

    Pairs whose union is not a member are skipped.
    """
    S = weight.system
    members = S.members
    if not members:
        return None
    vals = [weight(m) for m in members]
    scaled, _ = _integer_scale(vals)
    top = max(members).bit_length()
    if top <= 62 and max(scaled) < 1 << 60:
        return _check_log_weight_np(members, scaled, top)
    present = weight.values
    for i, x in enumerate(members):
        lx = vals[i]
        for j in range(i, len(members)):
            y = members[j]
            u = x | y
            if u in present and present[u] > lx + vals[j]:
                return x, y
    return None


def _compress(members, top_bits) -> tuple[np.ndarray, int]:
    """Masks renumbered onto the points some member uses; unions commute with this."""
    raw = np.array(members, dtype=np.int64)
    used = [b for b in range(top_bits) if (raw >> b & 1).any()]
    if len(used) == top_bits:
        return raw, top_bits
    out = np.zeros_like(raw)
    for k, b in enumerate(used):
        out |= (raw >> b & 1) << k
    return out, len(used)


def _check_log_weight_np(members, scaled, top_bits):
    masks, top_bits = _compress(members, top_bits)
    narrow = top_bits <= 24 and max(scaled) < 1 << 29
    masks = masks.astype(np.int32 if narrow else np.int64)
    vals = np.array(scaled, dtype=np.int32 if narrow else np.int64)
    if top_bits <= 24:
        lookup = np.full(1 << top_bits, -1, dtype=vals.dtype)
        lookup[masks] = vals

        def value_of(u):
            return lookup[u]

    else:
        order = np.argsort(masks)
        smasks, svals = masks[order], vals[order]

        def value_of(u):
            pos = np.searchsorted(smasks, u)
            pos = np.minimum(pos, len(smasks) - 1)
            return np.where(smasks[pos] == u, svals[pos], -1)

    # Rows go in chunks against every later column.  A violation (i, j) with
    # j < i inside a chunk mirrors (j, i), so the first flagged row has its
    # first flagged column at or after itself.
    chunk = max(1, (1 << 22) // max(1, len(members)))
    for start in range(0, len(members), chunk):
        rows = slice(start, start + chunk)
        u = masks[rows, None] | masks[None, start:]
        lu = value_of(u)
        bad = (lu >= 0) & (lu > vals[rows, None] + vals[None, start:])
        if bad.any():
            r = int(np.argmax(bad.any(axis=1)))
            c = int(np.argmax(bad[r]))
            return members[start + r], members[start + c]
    return None


def level_set(weight: LogWeight, L: Rational) -> SetSystem:
    S = weight.system
    return SetSystem(S.ground, tuple(m for m in S.members if weight(m) <= L))


# ---------------------------------------------------------------------------
# FBP iteration


class Closure(NamedTuple):
    members: tuple[int, ...]
    steps: int


def _covering_unions(active: Iterable[int]) -> list[int]:
    tops = maximal(active)
    return maximal(x | y for i, x in enumerate(tops) for y in tops[i:])


def fbp_step(
    E: Iterable[int], C: Rational, weight: LogWeight, system: SetSystem | None = None
) -> tuple[int, ...]:
    """Members of weight at most ``C`` lying under some union of two active members of ``E``."""
    S = weight.system if system is None else system
    E = S.subfamily(E)
    active = [x for x in E if weight(x) <= C]
    if not active:
        return ()
    unions = _covering_unions(active)
    return tuple(
        z
        for z in S.members
        if weight(z) <= C and any(z & ~u == 0 for u in unions)
    )


def fbp_closure(
    E: Iterable[int], C: Rational, weight: LogWeight, system: SetSystem | None = None
) -> Closure:
    """Least fixpoint of ``fbp_step`` above ``E`` cut to level ``C``.

    ``steps`` is the first ``k`` with ``FBP^k == FBP^(k+1)``.
    """
    S = weight.system if system is None else system
    E = S.subfamily(E)
    level = [z for z in S.members if weight(z) <= C]
    current = tuple(x for x in E if weight(x) <= C)
    steps = 0
    while current:
        unions = _covering_unions(current)
        nxt = tuple(z for z in level if any(z & ~u == 0 for u in unions))
        if nxt == current:
            break
        current = nxt
        steps += 1
    return Closure(current, steps)


def _grid(weight: LogWeight, host: SetSystem) -> list[Fraction]:
    return sorted({Fraction(0)} | {weight(x) for x in host.members})


def v_value(
    E: Iterable[int], z: int, weight: LogWeight, system: SetSystem | None = None
) -> VValue:
    """Exact ``V_E(z)``; infinite when ``z`` lies outside the generated filter.

    FBP members always sit below ``join(E)``, so the search runs inside the
    filter, which gives the same closures as the whole system.
    """
    S = weight.system if system is None else system
    E = S.subfamily(E)
    if z not in S:
        raise ValueError(f"{S.ground.show(z)} is not a member")
    host = filter_generated(E, S)
    if z not in host:
        return VValue.infinite()
    lz = weight(z)
    for C in _grid(weight, host):
        if C < lz:
            continue
        if z in fbp_closure(E, C, weight, host).members:
            return VValue(True, C)
    raise AssertionError("z in the filter must be reachable at the top level")


def v_table(
    E: Iterable[int], weight: LogWeight, system: SetSystem | None = None
) -> dict[int, VValue]:
    """``V_E(z)`` for every ``z`` in the filter generated by ``E``."""
    S = weight.system if system is None else system
    E = S.subfamily(E)
    host = filter_generated(E, S)
    out: dict[int, VValue] = {}
    todo = set(host.members)
    for C in _grid(weight, host):
        if not todo:
            break
        for z in fbp_closure(E, C, weight, host).members:
            if z in todo:
                out[z] = VValue(True, C)
                todo.discard(z)
    if todo:
        raise AssertionError("filter members left unreached at the top level")
    return out


# ---------------------------------------------------------------------------
# propagation constants


@dataclass(frozen=True)
class PropagationReport:
    level: Fraction
    examined: int
    families: int
    max_value: VValue
    witness: tuple[tuple[int, ...], int] | None
    exhaustive: bool

    def bounded_by(self, bound: Rational) -> bool:
        return self.max_value <= VValue(True, Fraction(bound))


def _incomparable(a: int, b: int) -> bool:
    u = a | b
    return u != a and u != b


def _antichains(items: Sequence[int], size: int):
    """Antichains of exactly ``size`` items, as index tuples in lex order."""
    n = len(items)
    compat = [0] * n
    for i in range(n):
        bits = 0
        for j in range(i + 1, n):
            if _incomparable(items[i], items[j]):
                bits |= 1 << j
        compat[i] = bits

    def rec(chosen: list[int], allowed: int):
        if len(chosen) == size:
            yield tuple(chosen)
            return
        need = size - len(chosen)
        while allowed and allowed.bit_count() >= need:
            j = (allowed & -allowed).bit_length() - 1
            allowed &= allowed - 1
            chosen.append(j)
            yield from rec(chosen, allowed & compat[j])
            chosen.pop()

    yield from rec([], (1 << n) - 1)


def propagation_constant(
    weight: LogWeight,
    L: Rational,
    max_size: int = 4,
    max_families: int = 10**6,
    system: SetSystem | None = None,
) -> PropagationReport:
    """Largest ``V_E(z)`` over non-empty ``E`` inside level ``L`` and ``z`` in its filter at level ``L``.

    Only antichains ``E`` are enumerated (by size, then lexicographically):
    any ``E`` shares its filter with its maximal members and, holding more
    members, has pointwise smaller ``V``.  ``exhaustive`` is true when no
    family was cut by either limit.
    """
    S = weight.system if system is None else system
    L = Fraction(L)
    W = [m for m in S.members if weight(m) <= L]
    best = VValue(True, Fraction(0))
    witness = None
    examined = 0
    families = 0
    truncated = False
    for size in range(1, max_size + 1):
        for combo in _antichains(W, size):
            if families >= max_families:
                truncated = True
                break
            families += 1
            E = tuple(W[i] for i in combo)
            table = v_table(E, weight, S)
            for z, v in table.items():
                if weight(z) > L:
                    continue
                examined += 1
                if witness is None or v > best:
                    best, witness = v, (E, z)
        if truncated:
            break
    if not truncated:
        truncated = next(_antichains(W, max_size + 1), None) is not None
    return PropagationReport(L, examined, families, best, witness, not truncated)


# ---------------------------------------------------------------------------
# block-symmetric engine


def _profile(mask: int, blocks: Sequence[int]) -> tuple[int, ...]:
    return tuple((mask & b).bit_count() for b in blocks)


def _representative(profile: Sequence[int], block_bits: Sequence[Sequence[int]]) -> int:
    m = 0
    for c, bits in zip(profile, block_bits):
        for i in bits[:c]:
            m |= 1 << i
    return m


def _maximal_rows(rows: np.ndarray) -> np.ndarray:
    remaining = rows
    kept = []
    while len(remaining):
        top = remaining[int(np.argmax(remaining.sum(axis=1)))]
        kept.append(top)
        remaining = remaining[~np.all(remaining <= top, axis=1)]
    return np.array(kept)


def v_value_symmetric(
    blocks: Sequence[int],
    weight_fn: Callable[[int], Rational],
    E: Iterable[int],
    z: int,
) -> VValue:
    """``V_E(z)`` in the full power set of the union of ``blocks``, computed on block profiles.

    Preconditions (``E`` is checked, the weight is trusted): ``E`` is a union of
    orbits of the group permuting points inside each block, and ``weight_fn``
    is invariant under that group.  Then FBP closures are unions of orbits and
    an orbit is determined by its vector of per-block counts.  Two orbits with
    count vectors ``q`` and ``r`` have members whose union covers exactly the
    count vectors below ``min(size, q + r)``, so the iteration runs on count
    vectors without enumerating the power set.
    """
    E = list(set(E))
    if not E:
        raise ValueError("E must be non-empty")
    top = join(E)
    used = [b for b in blocks if b & top]
    if join(used) != top:
        raise ValueError("join(E) must be a union of whole blocks")
    if z & ~top:
        return VValue.infinite()
    sizes = np.array([b.bit_count() for b in used], dtype=np.int64)
    block_bits = [[i for i in range(b.bit_length()) if b >> i & 1] for b in used]
    counts: dict[tuple[int, ...], int] = {}
    for x in E:
        p = _profile(x, used)
        counts[p] = counts.get(p, 0) + 1
    for p, k in counts.items():
        orbit = math.prod(math.comb(int(s), c) for s, c in zip(sizes, p))
        if k != orbit:
            raise ValueError("E is not closed under permutations inside blocks")

    profiles = np.array(
        list(itertools.product(*[range(int(s) + 1) for s in sizes])), dtype=np.int64
    )
    index = {tuple(int(v) for v in row): i for i, row in enumerate(profiles)}
    raw = [Fraction(weight_fn(_representative(row, block_bits))) for row in profiles]
    scaled, den = _integer_scale(raw)
    w = np.array(scaled, dtype=np.int64)
    start = np.zeros(len(profiles), dtype=bool)
    for p in counts:
        start[index[p]] = True
    target = index[_profile(z, used)]

    for C in sorted({Fraction(0)} | set(raw)):
        if C < raw[target]:
            continue
        in_level = w <= int(C * den)
        current = start & in_level
        while current.any() and not current[target]:
            tops = _maximal_rows(profiles[current])
            sums = np.minimum(tops[:, None, :] + tops[None, :, :], sizes)
            sums = _maximal_rows(sums.reshape(-1, len(sizes)))
            covered = np.zeros(len(profiles), dtype=bool)
            for s in sums:
                covered |= np.all(profiles <= s, axis=1)
            nxt = covered & in_level
            if np.array_equal(nxt, current):
                break
            current = nxt
        if current[target]:
            return VValue(True, C)
    raise AssertionError("target in the filter must be reachable at the top level")
