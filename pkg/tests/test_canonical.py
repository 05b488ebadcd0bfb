from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from unionlab.canonical import (
    Spread,
    canonical_system,
    contains_canonical,
    make_spread,
    power_set_system,
    refine,
    restrict,
    tmax,
    tmax_weight_value,
    tmin,
    tmin_weight_value,
    tort,
    transfer_tmax,
    verify_level_one_failure,
    weight_tmax,
    weight_tmin,
)
from unionlab.propagation import VValue, check_log_weight
from unionlab.setsystem import (
    GroundSet,
    cayley_embedding,
    is_union_closed,
    join,
    multiplication_table,
)


def pts(sp, *labels):
    return sp.ground.mask(labels)


def test_make_spread(sp2):
    assert sp2.sizes == (2, 3)
    assert sp2.ground.labels == ("e1_1", "e1_2", "e2_1", "e2_2", "e2_3")
    assert make_spread((1,)).sizes == (1,)
    assert make_spread(levels=4).sizes == (2, 3, 4, 5)
    with pytest.raises(ValueError):
        make_spread((3, 3), ground=GroundSet(("a", "b", "c")))


def test_spread_validation():
    g = GroundSet(tuple("abcd"))
    with pytest.raises(ValueError):
        Spread(g, (0b0011, 0b0110))
    with pytest.raises(ValueError):
        Spread(g, (0b0011, 0))
    with pytest.raises(ValueError):
        Spread(g, (0b0111, 0b1000))
    assert Spread(g, (0b0111, 0b1000), allow_shrinking=True).sizes == (3, 1)


def test_refine(sp2):
    assert refine(sp2, [(1, sp2.block(1)), (2, sp2.block(2))]) == sp2
    r = refine(sp2, [(1, pts(sp2, "e1_1")), (2, pts(sp2, "e2_1", "e2_2"))])
    assert r.sizes == (1, 2)
    assert refine(sp2, [(2, sp2.block(2))]).sizes == (3,)
    with pytest.raises(ValueError):
        refine(sp2, [(1, 1), (1, 2)])
    with pytest.raises(ValueError):
        refine(sp2, [(1, 0)])
    with pytest.raises(ValueError):
        refine(sp2, [(1, sp2.block(2))])


def test_constructor_examples(sp2):
    assert len(tmax(sp2)) == 10
    single = make_spread((2,))
    assert set(tmin(single).members) == {1, 2, 3}
    assert sp2.block(1) | pts(sp2, "e2_1") in tort(sp2)
    assert pts(sp2, "e2_1") in tmin(sp2)


@pytest.mark.parametrize("sizes", [(1,), (2, 3), (1, 1, 2), (2, 2, 3, 3), (1, 2, 2, 2, 3)])
@pytest.mark.parametrize("kind", ["tmax", "tmin", "tort"])
def test_canonical_systems_are_closed(sizes, kind):
    sp = make_spread(sizes)
    S = canonical_system(sp, kind)
    assert is_union_closed(S) == (True, None)
    expected = sum((1 << s) - 1 for s in sizes)
    if kind == "tort":
        # the full support appears once per level
        expected -= len(sizes) - 1
    assert len(S) == expected
    traces, _ = restrict(S, sp.support)
    assert traces.members == S.members
    assert contains_canonical(S, sp, kind).complete


def test_restrict_examples(m1):
    g, S = m1
    assert restrict(S, join(S.members))[0].members == S.members
    traces, back = restrict(S, g.mask(["alpha"]))
    assert set(traces.members) == {0, g.mask(["alpha"])}
    assert back[0] == g.mask(["beta"])


def test_contains_canonical_missing(sp2):
    wit = contains_canonical(tmin(sp2), sp2, "tmax")
    assert not wit.complete
    # level-1 members of T_min contain E_2, so the trace {e1_1} never appears
    assert wit.missing == (1, pts(sp2, "e1_1"))


def test_weight_examples(sp2):
    assert tmax_weight_value(sp2, pts(sp2, "e1_1")) == 1
    assert tmax_weight_value(sp2, pts(sp2, "e1_1", "e1_2")) == 0
    assert tmax_weight_value(sp2, sp2.block(1) | pts(sp2, "e2_1", "e2_2")) == 2
    assert tmin_weight_value(sp2, pts(sp2, "e2_1", "e2_2")) == 2
    assert tmin_weight_value(sp2, sp2.support) == 0
    assert tmin_weight_value(sp2, pts(sp2, "e1_1") | sp2.block(2)) == 1
    assert tmax_weight_value(sp2, 0) == tmin_weight_value(sp2, 0) == 0


@pytest.mark.parametrize("sizes", [(2, 3), (2, 3, 4), (1, 2, 3, 4), (2, 3, 4, 5)])
@pytest.mark.parametrize("build", [weight_tmax, weight_tmin])
def test_section3_weights_are_subadditive_on_power_set(sizes, build):
    sp = make_spread(sizes)
    w = build(sp)
    assert len(w.system) == 1 << sum(sizes)
    assert check_log_weight(w) is None


def test_section3_weights_subadditive_by_brute_force():
    sp = make_spread((2, 3))
    for build in (weight_tmax, weight_tmin):
        w = build(sp)
        values = {m: w(m) for m in w.system.members}
        assert oracles.first_subadditivity_violation(values, w.system.members) is None


@pytest.mark.parametrize("kind", ["tmax", "tmin"])
def test_level_rows_profile_agrees_with_explicit(kind):
    profile = verify_level_one_failure(kind, 4)
    explicit = verify_level_one_failure(kind, 4, engine="explicit")
    assert [r.v_exact for r in profile] == [r.v_exact for r in explicit]


def test_level_rows_sp2_against_brute_oracle():
    # independent fixpoint on the power set of E_1 | E_2
    sp = make_spread((2, 3))
    host = power_set_system(sp.ground, sp.support)
    for fn, kind in ((tmax_weight_value, "tmax"), (tmin_weight_value, "tmin")):
        values = {m: Fraction(fn(sp, m)) for m in host.members}
        low = sp.block(1) if kind == "tmax" else 0
        F = [low | 1 << i for i in (2, 3, 4)]
        v = oracles.v_value(F, join(F), values, host.members)
        row = verify_level_one_failure(kind, 2)[0]
        assert row.v_exact == VValue(True, v) == VValue(True, Fraction(2))


def test_tmax_rows_values():
    rows = verify_level_one_failure("tmax", 6)
    assert [r.n for r in rows] == [2, 3, 4, 5, 6]
    assert [int(r.v_exact.value) for r in rows] == [2, 2, 3, 3, 4]
    values = [r.v_exact for r in rows]
    assert values == sorted(values)
    assert all(r.passed for r in rows)


def test_tmin_rows_values():
    rows = verify_level_one_failure("tmin", 5)
    assert [int(r.v_exact.value) for r in rows] == [2, 2, 3, 3]
    assert all(r.passed for r in rows)


def test_level_rows_reject_bad_arguments():
    with pytest.raises(ValueError):
        verify_level_one_failure("tort", 3)
    with pytest.raises(ValueError):
        verify_level_one_failure("tmax", 1)
    with pytest.raises(ValueError):
        verify_level_one_failure("tmax", 3, engine="fast")


def test_transfer_to_same_representation(sp2):
    T = tmax(sp2)
    wit = contains_canonical(T, sp2, "tmax")
    out = transfer_tmax(wit, {x: x for x in T.members}, T)
    assert out.sizes == sp2.sizes
    for n in (1, 2):
        assert out.block(n) & ~sp2.block(n) == 0
    assert contains_canonical(T, out, "tmax").complete


def test_transfer_to_cayley_representation(sp2):
    T = tmax(sp2)
    wit = contains_canonical(T, sp2, "tmax")
    image, images = cayley_embedding(multiplication_table(T))
    corr = {x: images[i] for i, x in enumerate(T.members)}
    out = transfer_tmax(wit, corr, image)
    assert len(out) == 2 and out.ground == image.ground
    assert contains_canonical(image, out, "tmax").complete


def test_transfer_one_level():
    sp = make_spread((3,))
    T = tmax(sp)
    out = transfer_tmax(contains_canonical(T, sp, "tmax"), {x: x for x in T.members}, T)
    assert len(out) == 1


def test_transfer_rejects_incomplete_witness(sp2):
    wit = contains_canonical(tmin(sp2), sp2, "tmax")
    with pytest.raises(ValueError):
        transfer_tmax(wit, {}, tmin(sp2))


@given(st.lists(st.integers(1, 3), min_size=1, max_size=4))
def test_transfer_after_relabelling(sizes):
    sizes = sorted(sizes)
    sp = make_spread(sizes)
    T = tmax(sp)
    rev = GroundSet(tuple(reversed(sp.ground.labels)))
    n = sp.ground.size
    flip = lambda m: sum(1 << (n - 1 - i) for i in range(n) if m >> i & 1)
    from unionlab.setsystem import SetSystem

    T2 = SetSystem.of(rev, [flip(x) for x in T.members])
    out = transfer_tmax(contains_canonical(T, sp, "tmax"), {x: flip(x) for x in T.members}, T2)
    assert contains_canonical(T2, out, "tmax").complete
