from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from phitorsion import index as ix
from phitorsion.acceptance import _below, _brute_eunion, _brute_sum, _members, check_index_algebra
from phitorsion.index import IndexSet, IndexTerm, IndexTriple

S = IndexSet.of


def gens(E):
    return {(t.re, t.k) for t in E.generators}


# --- normalization ---------------------------------------------------------

def test_closure_drops_integer_shift():
    assert gens(S((0, 0), (1, 0))) == {(0, 0)}


def test_empty_set():
    assert S().is_empty


def test_lower_log_power_absorbed():
    assert gens(S((-2, 1), (-2, 0))) == {(-2, 1)}


def test_non_integer_shift_kept():
    assert gens(S((0, 0), ("1/2", 0))) == {(0, 0), (Fraction(1, 2), 0)}


def test_negative_log_power_rejected():
    with pytest.raises(ValueError):
        IndexTerm(Fraction(0), Fraction(0), -1)


def test_members_respect_cutoff():
    E = S((0, 1), cutoff=2)
    assert {(t.re, t.k) for t in E.members()} == {(a, k) for a in (0, 1, 2) for k in (0, 1)}


# --- operations ------------------------------------------------------------

def test_extended_union_common_exponent():
    assert gens(ix.extended_union(S((0, 0)), S((0, 0)))) == {(0, 1)}


def test_extended_union_with_empty():
    E = S((-1, 2), ("1/2", 0))
    assert ix.extended_union(E, S()) == E


def test_extended_union_adds_logs():
    assert gens(ix.extended_union(S((-2, 0)), S((-2, 1)))) == {(-2, 2)}


def test_extended_union_meets_at_larger_exponent():
    # (0,0) and (2,0) share exponents 2, 3, ...
    assert gens(ix.extended_union(S((0, 0)), S((2, 0)))) == {(0, 0), (2, 1)}


def test_minkowski_shift():
    assert gens(ix.minkowski_sum(S((0, 0)), S(("3/2", 0)))) == {(Fraction(3, 2), 0)}


def test_minkowski_with_empty():
    assert ix.minkowski_sum(S((0, 0)), S()).is_empty


def test_minkowski_componentwise():
    assert gens(ix.minkowski_sum(S((-2, 1)), S((3, 1)))) == {(1, 2)}


@pytest.mark.parametrize("E, c, strict, expected", [
    (S((0, 0)), 0, False, True),
    (S((0, 1)), 0, False, False),
    (S((-2, 0)), -2, True, False),
    (S((1, 3)), 0, True, True),
])
def test_check_bound(E, c, strict, expected):
    assert ix.check_bound(E, c, strict) is expected


def test_check_bound_above_cutoff():
    with pytest.raises(ValueError):
        ix.check_bound(S((0, 0), cutoff=2), 5)


def test_pushforward_of_empty():
    e = IndexTriple(S(), S(), S())
    assert all(x.is_empty for x in ix.pushforward_triple(e, e).as_tuple())


def test_pushforward_against_enumeration():
    left = IndexTriple(S((1, 0)), S((0, 0)), S((2, 0)))
    right = IndexTriple(S((0, 0)), S((0, 0)), S((1, 0)))
    F10, F11, F01 = ix.pushforward_triple(left, right).as_tuple()
    # F10 = (E11 + W10) eu E10 = {(0,0)} eu {(1,0)} -> {(0,0),(1,1)}
    assert gens(F10) == {(0, 0), (1, 1)}
    # F11 = (E10 + W01) eu (E11 + W11) = {(2,0)} eu {(0,0)} -> {(0,0),(2,1)}
    assert gens(F11) == {(0, 0), (2, 1)}
    # F01 = (E01 + W11) eu W01 = {(2,0)} eu {(1,0)} -> {(1,0),(2,1)}
    assert gens(F01) == {(1, 0), (2, 1)}


def test_brute_force_agreement():
    ok, detail = check_index_algebra(n_cases=40, seed=3)
    assert ok, detail


# --- face bounds -----------------------------------------------------------

@pytest.mark.parametrize("sigma, b, face, value", [
    (1, 2, "phif0", 0), (1, 2, "zf", -2), (1, 2, "bf0", -2),
    (2, 2, "phif0", -1), (2, 2, "zf", -4), (3, 7, "phif0", 0),
])
def test_resolvent_power_bounds(sigma, b, face, value):
    assert ix.resolvent_power_bounds(sigma, b)[face].value == value


def test_heat_trace_bounds_small_case():
    bd = ix.heat_trace_bounds(2, 2)
    assert bd["sc"].value >= 0 and bd["zf"].value >= 0
    assert bd["phif0"].value >= 3


@pytest.mark.parametrize("nu", range(1, 7))
@pytest.mark.parametrize("b", range(2, 9))
def test_heat_trace_phif0_grid(nu, b):
    assert ix.heat_trace_bounds(nu, b)["phif0"].value >= b + 1


def test_indicator_weight_loses_the_bound():
    # with the plain indicator the pushforward keeps the resolvent exponent at phif0
    damped = ix.heat_trace_bounds(2, 2, weight="damped")["phif0"].value
    plain = ix.heat_trace_bounds(2, 2, weight="indicator")["phif0"].value
    assert damped >= 3 and plain < damped


# --- parsing ---------------------------------------------------------------

def test_parse_round_trip_text():
    E = ix.parse_index_set("{(0,1), (-1/2+1/3i,2)}; cutoff=7")
    assert E.cutoff == 7
    assert ix.parse_index_set(str(E)) == E


@pytest.mark.parametrize("bad", ["(0,1)", "{(0,1) junk}", "{(a,1)}", "{(0,-1)}"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        ix.parse_index_set(bad)


# --- properties ------------------------------------------------------------

halves = st.integers(-8, 8).map(lambda n: Fraction(n, 2))
terms = st.builds(IndexTerm, halves, st.sampled_from([Fraction(0), Fraction(1, 3)]), st.integers(0, 2))
sets = st.frozensets(terms, max_size=3).map(lambda g: IndexSet(g, Fraction(6)))


@given(sets)
def test_normalize_idempotent(E):
    assert IndexSet(E.generators, E.cutoff) == E
    assert E.members() == IndexSet(E.members(), E.cutoff).members()


@given(sets, sets)
def test_union_commutes(E, F):
    assert ix.union(E, F) == ix.union(F, E)


@given(sets, sets)
def test_extended_union_commutes_and_contains_union(E, F):
    U = ix.extended_union(E, F)
    assert U == ix.extended_union(F, E)
    assert ix.union(E, F).members() <= U.members()


@given(sets, sets, sets)
def test_minkowski_associative(E, F, G):
    # with a cutoff above every partial sum nothing is truncated in between
    E, F, G = (x.with_cutoff(20) for x in (E, F, G))
    assert ix.minkowski_sum(ix.minkowski_sum(E, F), G) == ix.minkowski_sum(E, ix.minkowski_sum(F, G))


def test_truncation_loses_intermediate_generators():
    E, F, G = S(("-1/2", 0), cutoff=6), S(("5/2", 0), cutoff=6), S((4, 0), cutoff=6)
    left = ix.minkowski_sum(ix.minkowski_sum(E, F), G)
    right = ix.minkowski_sum(E, ix.minkowski_sum(F, G))
    assert gens(left) == {(6, 0)} and right.is_empty


@given(sets, sets)
def test_operations_match_enumeration(E, F):
    big = Fraction(12)
    Em, Fm = _members(E, big), _members(F, big)
    assert _members(ix.minkowski_sum(E, F), E.cutoff) == _brute_sum(Em, Fm, E.cutoff)
    low = _below(Em, E.cutoff), _below(Fm, E.cutoff)
    assert _members(ix.extended_union(E, F), E.cutoff) == _brute_eunion(*low, E.cutoff)


@given(sets, halves)
def test_shift_round_trip(E, c):
    shifted = ix.shift(E.with_cutoff(20), c)
    back = ix.shift(shifted, -c)
    assert back.with_cutoff(E.cutoff) == E


@given(sets, halves)
def test_check_bound_monotone(E, c):
    if ix.check_bound(E, c, strict=True):
        assert ix.check_bound(E, c, strict=False)
        assert ix.check_bound(E, c - 1, strict=True)


@given(sets)
def test_text_round_trip(E):
    assert ix.parse_index_set(str(E)) == E
