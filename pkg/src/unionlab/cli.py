"""Command-line front end.

Exit codes: 0 success, 1 a verified property fails, 2 parse or usage error,
3 a resource budget ran out before a verdict.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .canonical import (
    KINDS,
    contains_canonical,
    canonical_system,
    make_spread,
    power_set_system,
    transfer_tmax,
    verify_level_one_failure,
    weight_tmax,
    weight_tmin,
)
from .decisive_weight import verify_tort_failure, weight_from_colouring
from .dichotomy import (
    Colouring,
    DecisiveReport,
    ShatterWitness,
    Window,
    dichotomy_search,
    refined_structure,
)
from .fixtures import (
    section6_build,
    verify_L_propagation,
    verify_lemma_6_1,
    verify_section6_bounds,
)
from .propagation import fmt_rational, propagation_constant, v_value
from .setsystem import (
    DEFAULT_MEMBER_CAP,
    DEFAULT_NODE_BUDGET,
    BudgetExceeded,
    SetSystem,
    breadth,
    cayley_embedding,
    filter_generated,
    multiplication_table,
    union_closure,
)
from .textio import (
    ParseError,
    format_spread,
    format_system,
    format_weight,
    join_labels,
    parse_colouring,
    parse_spread,
    parse_system,
    parse_table,
    parse_weight,
    read_text,
    render,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    kind: str | None = None
    input: str | None = None
    spread: str | None = None
    colouring: str | None = None
    weight: str | None = None
    output: str | None = None
    format: str = "table"
    levels: int = 6
    level: Fraction = Fraction(1)
    cap_members: int = DEFAULT_MEMBER_CAP
    node_budget: int = DEFAULT_NODE_BUDGET
    max_subset: int = 4
    max_families: int = 10**6
    window: str | None = None
    bound: int | None = None
    depth: int = 1
    family: list[str] = field(default_factory=list)
    target: str | None = None
    n: int = 2
    C: Fraction = Fraction(1)
    columns: int = 15
    r_columns: int | None = None
    which: str = "S"
    class_index: int = 0
    engine: str = "profile"
    sizes: str | None = None
    schedule: str | None = None

    def __post_init__(self) -> None:
        for name in ("cap_members", "node_budget", "max_subset", "max_families", "depth"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.format not in ("table", "csv", "keyvalue"):
            raise UsageError("--format must be table, csv or keyvalue")


# ---------------------------------------------------------------------------
# input helpers


def _system(cfg: RunConfig) -> SetSystem:
    if cfg.input is None:
        raise UsageError("this command needs -i/--input")
    return parse_system(read_text(cfg.input), cfg.input)


def _spread(cfg: RunConfig, S: SetSystem | None = None):
    if cfg.spread is not None:
        return parse_spread(read_text(cfg.spread), None if S is None else S.ground, cfg.spread)
    if cfg.sizes is not None:
        if S is not None:
            raise UsageError("--sizes builds its own ground set; pass -s with an input system")
        return make_spread([int(v) for v in cfg.sizes.split(",")])
    raise UsageError("this command needs -s/--spread or --sizes")


def _member(S: SetSystem, text: str) -> int:
    try:
        return S.ground.mask(text.split())
    except ValueError as exc:
        raise ParseError(str(exc), None, "<argument>") from None


def _family(cfg: RunConfig, S: SetSystem) -> list[int]:
    fam = [_member(S, t) for t in cfg.family]
    for m in fam:
        if m not in S:
            raise ParseError(f"{S.ground.show(m)} is not a member", None, "<argument>")
    return fam


def _fmt_family(S: SetSystem, fam) -> str:
    return join_labels(S.ground, fam) if fam else "(none)"


# ---------------------------------------------------------------------------
# commands; each returns (report text, exit code)


def cmd_closure(cfg: RunConfig):
    S = _system(cfg)
    if not S.members:
        raise UsageError("closure needs at least one member")
    return format_system(union_closure(S.members, S.ground, cfg.cap_members)), EXIT_OK


def cmd_breadth(cfg: RunConfig):
    S = _system(cfg)
    res = breadth(S, cfg.node_budget)
    rows = [{
        "breadth": res.value,
        "exact": res.exact,
        "nodes": res.nodes,
        "family": _fmt_family(S, res.family),
    }]
    return render(rows, cfg.format), EXIT_OK if res.exact else EXIT_BUDGET


def cmd_filter(cfg: RunConfig):
    S = _system(cfg)
    return format_system(filter_generated(_family(cfg, S), S)), EXIT_OK


def _weight(cfg: RunConfig, S: SetSystem | None):
    if cfg.weight is None:
        raise UsageError("this command needs -w/--weight")
    return parse_weight(read_text(cfg.weight), S, cfg.weight)


def cmd_vprop(cfg: RunConfig):
    S = _system(cfg) if cfg.input else None
    weight = _weight(cfg, S)
    S = weight.system
    if cfg.target is None:
        raise UsageError("vprop needs --target")
    z = _member(S, cfg.target)
    if z not in S:
        raise ParseError(f"{S.ground.show(z)} is not a member", None, "<argument>")
    E = _family(cfg, S)
    if not E:
        raise UsageError("vprop needs at least one -e/--family member")
    v = v_value(E, z, weight)
    rows = [{"E": _fmt_family(S, E), "z": S.ground.show(z), "V": str(v)}]
    return render(rows, cfg.format), EXIT_OK


def cmd_propconst(cfg: RunConfig):
    S = _system(cfg) if cfg.input else None
    weight = _weight(cfg, S)
    rep = propagation_constant(weight, cfg.level, cfg.max_subset, cfg.max_families)
    rows = [_report_row(weight.system, rep)]
    code = EXIT_OK
    if cfg.bound is not None and not rep.bounded_by(cfg.bound):
        code = EXIT_FAIL
    return render(rows, cfg.format), code


def _report_row(S: SetSystem, rep) -> dict:
    E, z = rep.witness if rep.witness else ((), None)
    return {
        "L": fmt_rational(rep.level),
        "families": rep.families,
        "pairs": rep.examined,
        "max_V": str(rep.max_value),
        "witness_E": _fmt_family(S, E),
        "witness_z": S.ground.show(z) if z is not None else "(none)",
        "exhaustive": rep.exhaustive,
    }


def cmd_canonical(cfg: RunConfig):
    if cfg.input:
        S = _system(cfg)
        spread = _spread(cfg, S)
        wit = contains_canonical(S, spread, cfg.kind)
        row = {"kind": cfg.kind, "traces": len(wit.members), "complete": wit.complete}
        if wit.missing:
            n, a = wit.missing
            row["missing_level"] = n
            row["missing_part"] = S.ground.show(a)
        return render([row], cfg.format), EXIT_OK if wit.complete else EXIT_FAIL
    spread = _spread(cfg)
    return format_system(canonical_system(spread, cfg.kind)), EXIT_OK


def cmd_weight(cfg: RunConfig):
    if cfg.kind in ("tmax", "tmin"):
        S = _system(cfg) if cfg.input else None
        spread = _spread(cfg, S)
        if S is None:
            S = power_set_system(spread.ground, spread.support, cfg.cap_members)
        fn = weight_tmax if cfg.kind == "tmax" else weight_tmin
        return format_weight(fn(spread, S)), EXIT_OK
    S = _system(cfg)
    spread = _spread(cfg, S)
    col = _colouring(cfg, S)
    return format_weight(weight_from_colouring(S, spread, col, cfg.class_index)), EXIT_OK


def _colouring(cfg: RunConfig, S: SetSystem | None, ground=None) -> Colouring:
    g = S.ground if S is not None else ground
    if cfg.colouring is None:
        if g is None:
            raise UsageError("need -c/--colouring")
        return Colouring.trivial(g)
    return parse_colouring(read_text(cfg.colouring), g, cfg.colouring)


def _level_rows(rows) -> list[dict]:
    return [
        {
            "n": r.n,
            "|E_n|": r.block_size,
            "lambda_b": fmt_rational(r.lambda_b),
            "V_exact": str(r.v_exact),
            "bound": fmt_rational(r.bound),
            "pass": "pass" if r.passed else "fail",
        }
        for r in rows
    ]


def cmd_verify(cfg: RunConfig):
    kind = cfg.kind
    if kind in ("tmax", "tmin"):
        rows = verify_level_one_failure(kind, cfg.levels, cfg.engine, cfg.cap_members)
        ok = all(r.passed for r in rows)
        return render(_level_rows(rows), cfg.format), EXIT_OK if ok else EXIT_FAIL
    if kind == "tort":
        spread = _spread(cfg) if (cfg.spread or cfg.sizes) else make_spread(levels=cfg.levels)
        col = _colouring(cfg, None, spread.ground)
        rows = verify_tort_failure(spread, col, cfg.class_index)
        ok = all(r.passed for r in rows)
        return render(_level_rows(rows), cfg.format), EXIT_OK if ok else EXIT_FAIL
    bundle = section6_build(cfg.columns, cfg.r_columns, cap=cfg.cap_members)
    if kind == "section6":
        r = verify_section6_bounds(bundle, cfg.n)
        row = {
            "n": r.n,
            "lambda_b": fmt_rational(r.lambda_b),
            "E_n_in_W1": r.family_in_level_one,
            "V_exact": str(r.v_exact),
            "bound": fmt_rational(r.bound),
            "pass": "pass" if r.passed else "fail",
        }
        return render([row], cfg.format), EXIT_OK if r.passed else EXIT_FAIL
    if kind == "lemma61":
        r = verify_lemma_6_1(bundle, cfg.n, cfg.C, allow_outside_hypothesis=True)
        row = {
            "n": r.n,
            "C": fmt_rational(r.C),
            "hypothesis": 1 <= r.C <= r.n,
            "contained": r.holds,
            "steps": r.steps,
            "offending": bundle.ground.show(r.offending) if r.offending is not None else "(none)",
        }
        # outside the hypothesis a failure is the expected outcome, not a failed check
        code = EXIT_OK if r.holds or not 1 <= r.C <= r.n else EXIT_FAIL
        return render([row], cfg.format), code
    if kind == "lprop":
        rep = verify_L_propagation(bundle, cfg.which, cfg.level, cfg.max_subset, cfg.max_families)
        system = bundle.S if cfg.which == "S" else bundle.R
        row = _report_row(system, rep)
        row["pass"] = "pass" if rep.bounded_by(cfg.level) else "fail"
        return render([row], cfg.format), EXIT_OK if rep.bounded_by(cfg.level) else EXIT_FAIL
    raise UsageError(f"unknown verify target {kind!r}")


def cmd_dichotomy(cfg: RunConfig):
    S = _system(cfg)
    spread = _spread(cfg, S)
    window = Window.parse(cfg.window) if cfg.window else Window.span(1, len(spread), 1)
    res = dichotomy_search(S, spread, cfg.depth, window.t, cfg.bound, window)
    g = S.ground
    lines = [f"depth: {cfg.depth}", f"bound: {cfg.bound if cfg.bound is not None else 'none'}"]
    if isinstance(res, ShatterWitness):
        lines = ["kind: shatter"] + lines + [
            f"window: {res.window}",
            f"sequence: {join_labels(g, res.sequence)}",
            "cell_minima: " + " ".join(map(str, res.cell_minima)),
        ]
    elif isinstance(res, DecisiveReport):
        lines = ["kind: decisive"] + lines + [
            f"window: {res.window}",
            f"classes: {join_labels(g, res.colouring.classes)}",
            f"decisive_class: {res.decisive_class}",
            f"max_statistic: {res.max_statistic}",
        ] + [f"statistic {g.show(x)}: {s}" for x, s in res.table]
    else:
        lines = ["kind: inconclusive"] + lines + [
            f"window: {res.window}",
            f"reason: {res.reason}",
            f"rounds: {res.rounds}",
            f"sequence: {_fmt_family(S, res.sequence)}",
        ]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_refine_structure(cfg: RunConfig):
    S = _system(cfg)
    chain = _family(cfg, S)
    sched = None if cfg.schedule is None else [int(v) for v in cfg.schedule.split(",")]
    rs = refined_structure(S, chain, sched)
    lines = [
        "schedule: " + ",".join(map(str, rs.schedule)),
        "block_sizes: " + rs.size_note,
        f"tmax_verified: {'true' if rs.witness.complete else 'false'}",
    ]
    out = "\n".join(lines) + "\n" + format_spread(rs.spread)
    return out, EXIT_OK if rs.witness.complete else EXIT_FAIL


def cmd_section6(cfg: RunConfig):
    bundle = section6_build(cfg.columns, cfg.r_columns, cap=cfg.cap_members)
    files = {
        "S.txt": format_system(bundle.S),
        "T.txt": format_system(bundle.T),
        "R.txt": format_system(bundle.R),
        "S.weight": format_weight(bundle.weight_S),
        "T.weight": format_weight(bundle.weight_T),
        "R.weight": format_weight(bundle.weight_R),
    }
    rows = [{"system": k, "members": len(s)} for k, s in (("S", bundle.S), ("T", bundle.T), ("R", bundle.R))]
    if cfg.output:
        out = Path(cfg.output)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text, encoding="utf-8")
    return render(rows, cfg.format), EXIT_OK


def cmd_cayley(cfg: RunConfig):
    if cfg.input is None:
        raise UsageError("cayley needs -i/--input")
    text = read_text(cfg.input)
    if text.lstrip().startswith("elements"):
        table = parse_table(text, cfg.input)
    else:
        table = multiplication_table(parse_system(text, cfg.input))
    image, _ = cayley_embedding(table)
    return format_system(image), EXIT_OK


def cmd_transfer_tmax(cfg: RunConfig):
    S = _system(cfg)
    spread = _spread(cfg, S)
    wit = contains_canonical(S, spread, "tmax")
    if not wit.complete:
        return f"missing trace at level {wit.missing[0]}\n", EXIT_FAIL
    table = multiplication_table(S)
    image, images = cayley_embedding(table)
    corr = {x: images[i] for i, x in enumerate(S.members)}
    out = transfer_tmax(wit, corr, image)
    return format_spread(out), EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig], tuple[str, int]]] = {
    "closure": cmd_closure,
    "breadth": cmd_breadth,
    "filter": cmd_filter,
    "vprop": cmd_vprop,
    "propconst": cmd_propconst,
    "canonical": cmd_canonical,
    "weight": cmd_weight,
    "verify": cmd_verify,
    "dichotomy": cmd_dichotomy,
    "refine-structure": cmd_refine_structure,
    "section6": cmd_section6,
    "cayley": cmd_cayley,
    "transfer-tmax": cmd_transfer_tmax,
}


# ---------------------------------------------------------------------------
# argument parsing


def _rational(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    if q < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return q


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input")
    common.add_argument("-s", "--spread")
    common.add_argument("-c", "--colouring")
    common.add_argument("-w", "--weight")
    common.add_argument("-o", "--output")
    common.add_argument("--format", default="table", choices=("table", "csv", "keyvalue"))
    common.add_argument("--levels", type=int, default=6)
    common.add_argument("--level", type=_rational, default=Fraction(1))
    common.add_argument("--cap-members", type=int, default=DEFAULT_MEMBER_CAP)
    common.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    common.add_argument("--max-subset", type=int, default=4)
    common.add_argument("--max-families", type=int, default=10**6)
    common.add_argument("--window", help="n0:N:t")
    common.add_argument("--bound", type=int)
    common.add_argument("--depth", type=int, default=1)
    common.add_argument("-e", "--family", action="append", default=[],
                        help="one member as space-separated labels; repeatable")
    common.add_argument("--target", help="member as space-separated labels")
    common.add_argument("--n", type=int, default=2)
    common.add_argument("--C", type=_rational, default=Fraction(1))
    common.add_argument("--columns", type=int, default=15)
    common.add_argument("--r-columns", type=int)
    common.add_argument("--which", choices=("S", "R"), default="S")
    common.add_argument("--class", dest="class_index", type=int, default=0)
    common.add_argument("--engine", choices=("profile", "explicit"), default="profile")
    common.add_argument("--sizes", help="comma-separated block sizes")
    common.add_argument("--schedule", help="comma-separated n_k values")

    parser = argparse.ArgumentParser(
        prog="unionlab", description="Exact experiments on finite union-closed set systems."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("closure", "breadth", "filter", "vprop", "propconst", "dichotomy",
                 "refine-structure", "section6", "cayley", "transfer-tmax"):
        sub.add_parser(name, parents=[common])
    for name, kinds in (
        ("canonical", KINDS),
        ("weight", ("tmax", "tmin", "colouring")),
        ("verify", ("tmax", "tmin", "tort", "section6", "lemma61", "lprop")),
    ):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("kind", choices=kinds)
    return parser


def run(cfg: RunConfig) -> tuple[str, int]:
    try:
        return COMMANDS[cfg.command](cfg)
    except BudgetExceeded as exc:
        return f"budget exhausted: {exc}\n", EXIT_BUDGET
    except ParseError as exc:
        return f"parse error: {exc}\n", EXIT_PARSE
    except (UsageError, ValueError) as exc:
        return f"error: {exc}\n", EXIT_PARSE


def main(argv: Sequence[str] | None = None) -> int:
    args = vars(build_parser().parse_args(argv))
    try:
        cfg = RunConfig(**args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    text, code = run(cfg)
    stream = sys.stderr if code in (EXIT_PARSE,) else sys.stdout
    if cfg.output and cfg.command != "section6" and code != EXIT_PARSE:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
