from fractions import Fraction

import pytest
from hypothesis import given

from strategies import closed_systems, systems_with_weight
from unionlab.canonical import make_spread
from unionlab.dichotomy import Colouring
from unionlab.propagation import LogWeight
from unionlab.setsystem import GroundSet, multiplication_table
from unionlab.textio import (
    ParseError,
    format_colouring,
    format_spread,
    format_system,
    format_table,
    format_weight,
    parse_colouring,
    parse_spread,
    parse_system,
    parse_table,
    parse_weight,
    read_text,
    render,
)

M1_TEXT = """\
# the three-point example
ground: alpha beta gamma
member: alpha
member: beta
member: alpha beta
member: alpha beta gamma
"""


def test_parse_system(m1):
    g, S = m1
    assert parse_system(M1_TEXT) == S


def test_empty_member_line():
    S = parse_system("ground: a b\nmember:\nmember: a\n")
    assert 0 in S and len(S) == 2


def test_duplicate_member_reports_both_lines():
    with pytest.raises(ParseError) as err:
        parse_system(M1_TEXT + "member: beta alpha\n", "m1.txt")
    assert err.value.line == 7
    assert "m1.txt:7" in str(err.value)
    assert "line 5" in str(err.value)


@pytest.mark.parametrize(
    "text,line",
    [
        ("member: a\n", 1),
        ("ground: a b\nmember: c\n", 2),
        ("ground: a b\nmember: a a\n", 2),
        ("ground: a b\n\nblock: a\n", 3),
        ("ground: a a\n", 1),
    ],
)
def test_system_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_system(text)
    assert err.value.line == line


@given(closed_systems())
def test_system_round_trip(S):
    assert parse_system(format_system(S)) == S


@given(closed_systems(max_points=4, max_gens=3))
def test_table_round_trip(S):
    t = multiplication_table(S)
    assert parse_table(format_table(t)) == t


def test_table_errors():
    with pytest.raises(ParseError):
        parse_table("elements: 2\n0 1\n")
    with pytest.raises(ParseError) as err:
        parse_table("elements: 2\n0 1\n1 x\n")
    assert err.value.line == 3
    with pytest.raises(ParseError):
        parse_table("elements: 2\n0 1\n0 1\n")  # not commutative


@given(systems_with_weight())
def test_weight_round_trip(pair):
    S, values = pair
    w = LogWeight(S, {m: Fraction(v, 2) for m, v in values.items()})
    back = parse_weight(format_weight(w), S)
    assert all(back(m) == w(m) for m in S.members)
    alone = parse_weight(format_weight(w))
    assert alone.system == S


def test_weight_totality(m1):
    g, S = m1
    text = "weight: alpha = 1\nweight: beta = 1/2\nweight: alpha beta = 1\n"
    with pytest.raises(ParseError, match="not total"):
        parse_weight(text, S)
    w = parse_weight(text + "weight: alpha beta gamma = 3/2\n", S)
    assert w(g.full) == Fraction(3, 2)


@pytest.mark.parametrize(
    "body,msg",
    [
        ("weight: alpha 1\n", "= value"),
        ("weight: alpha = x\n", "bad rational"),
        ("weight: alpha = -1\n", "non-negative"),
        ("weight: alpha = 1\nweight: alpha = 2\n", "twice"),
        ("weight: gamma = 1\n", "not a member"),
    ],
)
def test_weight_errors(m1, body, msg):
    g, S = m1
    with pytest.raises(ParseError, match=msg):
        parse_weight(body, S)


def test_weight_needs_ground():
    with pytest.raises(ParseError, match="ground"):
        parse_weight("weight: a = 1\n")


def test_spread_and_colouring_round_trip():
    sp = make_spread((2, 3, 4))
    assert parse_spread(format_spread(sp)) == sp
    col = Colouring(sp.ground, (sp.block(1) | sp.block(3), sp.block(2)))
    assert parse_colouring(format_colouring(col)) == col


def test_spread_and_colouring_errors():
    g = GroundSet(("a", "b", "c"))
    with pytest.raises(ParseError):
        parse_spread("block: a\nblock: a b\n", g)  # overlapping blocks
    with pytest.raises(ParseError):
        parse_colouring("class: a\n", g)  # does not cover
    with pytest.raises(ParseError, match="differs"):
        parse_spread("ground: a b\nblock: a\n", g)
    with pytest.raises(ParseError, match="no ground"):
        parse_colouring("class: a\n")


def test_read_text_missing(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        read_text(tmp_path / "absent.txt")


def test_render_formats():
    rows = [{"n": 2, "ok": True, "q": Fraction(1, 3)}, {"n": 10, "ok": False, "q": Fraction(3, 2)}]
    assert render(rows, "csv") == "n,ok,q\n2,true,1/3\n10,false,1.5\n"
    assert render(rows, "keyvalue") == "n: 2\nok: true\nq: 1/3\n\nn: 10\nok: false\nq: 1.5\n"
    assert render(rows, "table").splitlines() == [" n     ok    q", " 2   true  1/3", "10  false  1.5"]
    assert render([], "csv") == ""
    with pytest.raises(ValueError):
        render(rows, "xml")


def test_csv_quotes_commas():
    assert render([{"family": "{a, b}"}], "csv") == 'family\n"{a, b}"\n'
