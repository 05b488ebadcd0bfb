"""Line-based text formats for systems, tables, weights, spreads and colourings.

Every format is UTF-8, one record per line, ``#`` starts a comment and blank
lines are ignored.  Writers emit exactly what the readers accept, so every
file round-trips.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .canonical import Spread
from .dichotomy import Colouring
from .propagation import LogWeight, fmt_rational
from .setsystem import GroundSet, MultiplicationTable, SetSystem


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.source = source


def _records(text: str) -> list[tuple[int, str, str]]:
    """``(line number, key, rest)`` for every non-blank line."""
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        out.append((no, key.strip() if sep else "", rest.strip() if sep else line))
    return out


def _mask(ground: GroundSet, labels: str, no: int, source: str) -> int:
    names = labels.split()
    if len(set(names)) != len(names):
        raise ParseError("repeated label in one member", no, source)
    try:
        return ground.mask(names)
    except ValueError as exc:
        raise ParseError(str(exc), no, source) from None


def _ground(no: int, rest: str, source: str) -> GroundSet:
    try:
        return GroundSet(tuple(rest.split()))
    except ValueError as exc:
        raise ParseError(str(exc), no, source) from None


def _labels_line(key: str, ground: GroundSet, mask: int) -> str:
    names = " ".join(ground.names(mask))
    return f"{key}: {names}" if names else f"{key}:"


# ---------------------------------------------------------------------------
# set systems


def parse_system(text: str, source: str = "<input>") -> SetSystem:
    recs = _records(text)
    if not recs or recs[0][1] != "ground":
        raise ParseError("first record must be 'ground:'", recs[0][0] if recs else None, source)
    ground = _ground(recs[0][0], recs[0][2], source)
    members: list[int] = []
    seen: dict[int, int] = {}
    for no, key, rest in recs[1:]:
        if key != "member":
            raise ParseError(f"expected 'member:', got {key or rest!r}", no, source)
        m = _mask(ground, rest, no, source)
        if m in seen:
            raise ParseError(f"duplicate member (first on line {seen[m]})", no, source)
        seen[m] = no
        members.append(m)
    return SetSystem.of(ground, members)


def format_system(S: SetSystem) -> str:
    lines = ["ground: " + " ".join(S.ground.labels)]
    lines += [_labels_line("member", S.ground, m) for m in S.members]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# multiplication tables


def parse_table(text: str, source: str = "<input>") -> MultiplicationTable:
    recs = _records(text)
    if not recs or recs[0][1] != "elements":
        raise ParseError("first record must be 'elements:'", recs[0][0] if recs else None, source)
    try:
        n = int(recs[0][2])
    except ValueError:
        raise ParseError("element count must be an integer", recs[0][0], source) from None
    rows = recs[1:]
    if len(rows) != n:
        raise ParseError(f"expected {n} table rows, found {len(rows)}", None, source)
    product = []
    for no, key, rest in rows:
        if key:
            raise ParseError("table rows hold integers only", no, source)
        try:
            row = [int(v) for v in rest.split()]
        except ValueError:
            raise ParseError("table entries must be integers", no, source) from None
        if len(row) != n:
            raise ParseError(f"row has {len(row)} entries, expected {n}", no, source)
        product.append(tuple(row))
    try:
        return MultiplicationTable(n, tuple(product))
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def format_table(table: MultiplicationTable) -> str:
    lines = [f"elements: {table.n}"]
    lines += [" ".join(map(str, row)) for row in table.product]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# weights


def parse_weight(
    text: str, system: SetSystem | None = None, source: str = "<input>"
) -> LogWeight:
    """Weight lines ``weight: <labels> = q``.

    With ``system`` given, every member must receive a value.  Otherwise the
    file needs a leading ``ground:`` record and its weighted members form the
    system.
    """
    recs = _records(text)
    ground = system.ground if system is not None else None
    if recs and recs[0][1] == "ground":
        g = _ground(recs[0][0], recs[0][2], source)
        if ground is not None and g != ground:
            raise ParseError("weight ground differs from the system ground", recs[0][0], source)
        ground = g
        recs = recs[1:]
    if ground is None:
        raise ParseError("weight file without a system needs a 'ground:' record", None, source)
    values: dict[int, Fraction] = {}
    lines: dict[int, int] = {}
    for no, key, rest in recs:
        if key != "weight":
            raise ParseError(f"expected 'weight:', got {key or rest!r}", no, source)
        labels, sep, value = rest.rpartition("=")
        if not sep:
            raise ParseError("weight line needs '= value'", no, source)
        m = _mask(ground, labels, no, source)
        if m in values:
            raise ParseError(f"member weighted twice (first on line {lines[m]})", no, source)
        try:
            q = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational {value.strip()!r}", no, source) from None
        if q < 0:
            raise ParseError("weights must be non-negative", no, source)
        values[m] = q
        lines[m] = no
    if system is None:
        system = SetSystem.of(ground, values)
    else:
        extra = [m for m in values if m not in system]
        if extra:
            raise ParseError(f"{ground.show(extra[0])} is not a member", lines[extra[0]], source)
        missing = [m for m in system.members if m not in values]
        if missing:
            raise ParseError(
                f"weight is not total: no value for {ground.show(missing[0])}", None, source
            )
    return LogWeight(system, values)


def format_weight(weight: LogWeight) -> str:
    S = weight.system
    lines = ["ground: " + " ".join(S.ground.labels)]
    for m in S.members:
        names = " ".join(S.ground.names(m))
        lines.append(f"weight: {names} = {weight(m)}" if names else f"weight: = {weight(m)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# spreads and colourings


def _blocks(
    text: str, key: str, ground: GroundSet | None, source: str
) -> tuple[GroundSet, list[int]]:
    recs = _records(text)
    if recs and recs[0][1] == "ground":
        g = _ground(recs[0][0], recs[0][2], source)
        if ground is not None and g != ground:
            raise ParseError("ground differs from the system ground", recs[0][0], source)
        ground = g
        recs = recs[1:]
    if ground is None:
        raise ParseError("no ground set: give a system or a 'ground:' record", None, source)
    parts = []
    for no, k, rest in recs:
        if k != key:
            raise ParseError(f"expected '{key}:', got {k or rest!r}", no, source)
        parts.append(_mask(ground, rest, no, source))
    return ground, parts


def parse_spread(
    text: str, ground: GroundSet | None = None, source: str = "<input>", allow_shrinking: bool = False
) -> Spread:
    ground, blocks = _blocks(text, "block", ground, source)
    try:
        return Spread(ground, tuple(blocks), allow_shrinking)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def format_spread(spread: Spread) -> str:
    lines = ["ground: " + " ".join(spread.ground.labels)]
    lines += [_labels_line("block", spread.ground, b) for b in spread.blocks]
    return "\n".join(lines) + "\n"


def parse_colouring(text: str, ground: GroundSet | None = None, source: str = "<input>") -> Colouring:
    ground, classes = _blocks(text, "class", ground, source)
    try:
        return Colouring(ground, tuple(classes))
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def format_colouring(colouring: Colouring) -> str:
    lines = ["ground: " + " ".join(colouring.ground.labels)]
    lines += [_labels_line("class", colouring.ground, c) for c in colouring.classes]
    return "\n".join(lines) + "\n"


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read: {exc}", None, str(path)) from None


# ---------------------------------------------------------------------------
# reports


def render(rows: Sequence[Mapping[str, object]], fmt: str) -> str:
    """Rows of equal keys as an aligned table, CSV, or ``key: value`` blocks."""
    if not rows:
        return ""
    keys = list(rows[0])
    cells = [[_cell(r[k]) for k in keys] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        w.writerows(cells)
        return buf.getvalue()
    if fmt == "keyvalue":
        blocks = ["\n".join(f"{k}: {v}" for k, v in zip(keys, row)) for row in cells]
        return "\n\n".join(blocks) + "\n"
    if fmt == "table":
        widths = [max(len(k), *(len(row[i]) for row in cells)) for i, k in enumerate(keys)]
        out = ["  ".join(k.rjust(w) for k, w in zip(keys, widths)).rstrip()]
        out += ["  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _cell(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return fmt_rational(value)
    return str(value)


def join_labels(ground: GroundSet, members: Iterable[int]) -> str:
    return " | ".join(ground.show(m) for m in members)
