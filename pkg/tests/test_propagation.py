from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given

import oracles
from strategies import ground, systems_with_weight
from unionlab.canonical import make_spread, tmax, weight_tmax
from unionlab.propagation import (
    LogWeight,
    VValue,
    check_log_weight,
    fbp_closure,
    fbp_step,
    fmt_rational,
    level_set,
    propagation_constant,
    v_table,
    v_value,
    v_value_symmetric,
)
from unionlab.setsystem import SetSystem, filter_generated, join, union_closure


def zero(S):
    return LogWeight.from_function(S, lambda x: 0)


def card(S):
    return LogWeight.from_function(S, lambda x: x.bit_count())


def test_weight_validation(m1):
    g, S = m1
    with pytest.raises(ValueError):
        LogWeight(S, {m: 0 for m in S.members[:-1]})
    with pytest.raises(ValueError):
        LogWeight(S, {m: -1 for m in S.members})


def test_check_log_weight_examples(m1):
    g, S = m1
    assert check_log_weight(zero(S)) is None
    assert check_log_weight(card(S)) is None
    a, b = g.mask(["alpha"]), g.mask(["beta"])
    bad = LogWeight(S, {a: 0, b: 0, a | b: 1, g.full: 0})
    assert check_log_weight(bad) == (a, b)


@given(systems_with_weight())
def test_check_log_weight_matches_brute_force(sw):
    S, values = sw
    found = check_log_weight(LogWeight(S, values))
    expected = oracles.first_subadditivity_violation(values, S.members)
    assert (found is None) == (expected is None)
    if found is not None:
        x, y = found
        assert values[x | y] > values[x] + values[y]


def test_check_log_weight_handles_fractions_and_wide_masks():
    S = union_closure([1 << 70, 1 << 3, 1 << 40], ground(71))
    w = LogWeight.from_function(S, lambda x: Fraction(x.bit_count(), 3))
    assert check_log_weight(w) is None
    w2 = LogWeight.from_function(S, lambda x: Fraction(1, 3) if x.bit_count() == 3 else 0)
    assert check_log_weight(w2) is not None


def test_level_set(m1, sp2):
    g, S = m1
    assert level_set(zero(S), 0).members == S.members
    assert set(level_set(card(S), 1).members) == {g.mask(["alpha"]), g.mask(["beta"])}
    w = weight_tmax(sp2, tmax(sp2))
    zero_members = level_set(w, 0).members
    # full blocks only: E_1 and E_1 | E_2
    assert set(zero_members) == {sp2.block(1), sp2.support}


def test_fbp_examples(m1, sp2):
    g, S = m1
    a, b = g.mask(["alpha"]), g.mask(["beta"])
    assert set(fbp_step([a, b], 0, zero(S))) == {a, b, a | b}
    assert fbp_step([], 0, zero(S)) == ()
    res = fbp_closure([a, b], 0, zero(S))
    assert set(res.members) == {a, b, a | b} and res.steps == 1
    assert fbp_closure([a, b], 0, card(S)).members == ()

    T = tmax(sp2)
    w = weight_tmax(sp2, T)
    E1 = sp2.block(1)
    F2 = [E1 | 1 << i for i in (2, 3, 4)]
    assert sp2.support not in fbp_step(F2, 1, w)
    assert sp2.support not in fbp_closure(F2, 1, w).members
    assert sp2.support in fbp_closure(F2, 2, w).members


def test_v_value_examples(m1, sp2):
    g, S = m1
    a, b = g.mask(["alpha"]), g.mask(["beta"])
    assert v_value([a], a, zero(S)) == VValue(True, Fraction(0))
    assert v_value([a, b], a | b, zero(S)) == VValue(True, Fraction(0))
    assert v_value([a], b, zero(S)) == VValue.infinite()
    assert str(v_value([a], b, zero(S))) == "infinite"
    T = tmax(sp2)
    F2 = [sp2.block(1) | 1 << i for i in (2, 3, 4)]
    assert v_value(F2, sp2.support, weight_tmax(sp2, T)) == VValue(True, Fraction(2))
    # same answer with the weight hosted on the whole power set
    assert v_value(F2, sp2.support, weight_tmax(sp2)) == VValue(True, Fraction(2))


def test_v_value_errors(m1):
    g, S = m1
    with pytest.raises(ValueError):
        v_value([g.mask(["gamma"])], g.full, zero(S))
    with pytest.raises(ValueError):
        v_value([g.full], g.mask(["gamma"]), zero(S))


@given(systems_with_weight(max_points=4, max_gens=4))
def test_v_value_matches_brute_force(sw):
    S, values = sw
    w = LogWeight(S, values)
    for r in (1, 2):
        for E in combinations(S.members, r):
            table = v_table(E, w)
            for z in S.members:
                expect = oracles.v_value(list(E), z, values, S.members)
                got = v_value(E, z, w)
                if expect is None:
                    assert not got.finite and z not in table
                else:
                    assert got == VValue(True, expect) == table[z]


@given(systems_with_weight(max_points=4, max_gens=4))
def test_closure_monotone_in_level_and_family(sw):
    S, values = sw
    w = LogWeight(S, values)
    grid = sorted(set(values.values()) | {0})
    for E in combinations(S.members, 2):
        for C, C2 in zip(grid, grid[1:]):
            assert set(fbp_closure(E, C, w).members) <= set(fbp_closure(E, C2, w).members)
        for C in grid:
            assert set(fbp_closure(E[:1], C, w).members) <= set(fbp_closure(E, C, w).members)
            assert all(values[z] <= C for z in fbp_step(E, C, w))
        for z in S.members:
            assert v_value(E, z, w) <= v_value(E[:1], z, w)


@given(systems_with_weight(max_points=4, max_gens=4))
def test_v_finite_exactly_on_filter_and_below_ceiling(sw):
    S, values = sw
    w = LogWeight(S, values)
    top = max(values.values())
    for E in combinations(S.members, 2):
        filt = set(filter_generated(E, S).members)
        for z in S.members:
            v = v_value(E, z, w)
            assert v.finite == (z in filt)
            if v.finite:
                assert v.value <= top
        for x in E:
            assert v_value(E, x, w).value <= values[x]


def test_propagation_constant_zero_weight(m1):
    _, S = m1
    rep = propagation_constant(zero(S), 0)
    assert rep.max_value == VValue(True, Fraction(0))
    assert rep.exhaustive


def test_propagation_constant_tmax_level_one(sp2):
    T = tmax(sp2)
    w = weight_tmax(sp2, T)
    rep = propagation_constant(w, 1)
    assert rep.max_value >= VValue(True, Fraction(2))
    E, z = rep.witness
    assert v_value(E, z, w) == rep.max_value
    assert rep.exhaustive


@given(systems_with_weight(max_points=3, max_gens=3, max_value=2))
def test_propagation_constant_matches_enumeration_of_all_families(sw):
    S, values = sw
    w = LogWeight(S, values)
    for L in (0, 1):
        W = [m for m in S.members if values[m] <= L]
        best = Fraction(0)
        for r in range(1, len(W) + 1):
            for E in combinations(W, r):
                for z in W:
                    v = oracles.v_value(list(E), z, values, S.members)
                    if v is not None:
                        best = max(best, v)
        rep = propagation_constant(w, L, max_size=len(S))
        assert rep.exhaustive
        assert rep.max_value == VValue(True, best)


def test_propagation_constant_reports_truncation():
    S = union_closure([1 << i for i in range(5)], ground(5))
    rep = propagation_constant(zero(S), 0, max_size=2)
    assert not rep.exhaustive
    rep = propagation_constant(zero(S), 0, max_size=5, max_families=3)
    assert not rep.exhaustive and rep.families == 3


def test_fmt_rational():
    assert fmt_rational(Fraction(3, 2)) == "1.5"
    assert fmt_rational(Fraction(3, 4)) == "0.75"
    assert fmt_rational(Fraction(1, 3)) == "1/3"
    assert fmt_rational(4) == "4"


@pytest.mark.parametrize("sizes", [(2, 3), (2, 3, 4), (1, 2, 2)])
def test_profile_engine_matches_explicit(sizes):
    sp = make_spread(sizes)
    from unionlab.canonical import power_set_system, tmax_weight_value, tmin_weight_value

    host = power_set_system(sp.ground, sp.support)
    for fn in (tmax_weight_value, tmin_weight_value):
        w = LogWeight.from_function(host, lambda x: fn(sp, x))
        for n in range(1, len(sp) + 1):
            E = [sp.below(n) | 1 << i for i in range(sp.ground.size) if sp.block(n) >> i & 1]
            b = join(E)
            for z in (b, sp.below(n) | sp.block(n)):
                assert v_value_symmetric(sp.blocks, lambda x: fn(sp, x), E, z) == v_value(E, z, w)


def test_profile_engine_rejects_asymmetric_family():
    sp = make_spread((2, 3))
    with pytest.raises(ValueError):
        v_value_symmetric(sp.blocks, lambda x: 0, [sp.block(1) | 1 << 2, sp.block(1) | 0b11000], sp.support)
    with pytest.raises(ValueError):
        v_value_symmetric(sp.blocks, lambda x: 0, [sp.block(1) | 1 << 2], sp.support)


@given(systems_with_weight(max_points=4, max_gens=4, max_value=3))
def test_check_log_weight_on_sparse_high_points(pair):
    S, values = pair
    # spread the points out past 24 bits so the checker has to renumber them
    spread_out = lambda m: sum(1 << (9 * i + 3) for i in range(4) if m >> i & 1)
    g = ground(40)
    T = SetSystem.of(g, [spread_out(m) for m in S.members])
    w = LogWeight(T, {spread_out(m): Fraction(v) for m, v in values.items()})
    found = check_log_weight(w)
    expected = oracles.first_subadditivity_violation(w.values, T.members)
    assert (found is None) == (expected is None)
    if found is not None:
        x, y = found
        assert w(x | y) > w(x) + w(y)
