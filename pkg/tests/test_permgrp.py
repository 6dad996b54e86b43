import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import loops
from loopnil import corpus
from loopnil.errors import BudgetExceeded, NotNilpotent, NotSubgroup
from loopnil.loop import compose, invert, quotient, center
from loopnil.permgrp import (
    PermGroup,
    center_series,
    commutator,
    element_order,
    generate,
    group_center,
    inn,
    is_normal_subgroup,
    is_p_group,
    lower_central_series,
    mlt,
    nilpotency_class,
    normal_closure,
    normalizer,
    point_orbit,
    point_stabilizer,
    subgroup,
    sylow_complement,
    sylow_subgroup,
)

S4_GENS = [(1, 0, 2, 3), (1, 2, 3, 0)]
D4_GENS = [(1, 2, 3, 0), (0, 3, 2, 1)]  # symmetries of a square


def brute_lower_central(G):
    """gamma_{i+1} = subgroup generated by all [g, h], g in G, h in gamma_i."""
    series = [G.as_set()]
    while True:
        comms = {commutator(g, h) for g in G.elements for h in series[-1]}
        nxt = generate(list(comms), degree=G.degree).as_set()
        if nxt == series[-1]:
            return series
        series.append(nxt)


def brute_normalizer(G, H):
    Hs = H.as_set()
    return {g for g in G.elements if {compose(compose(g, h), invert(g)) for h in Hs} == Hs}


def test_generate_small_groups():
    assert generate(S4_GENS).order == 24
    assert generate(D4_GENS).order == 8
    assert generate([], degree=3).order == 1
    with pytest.raises(ValueError):
        generate([])
    with pytest.raises(ValueError):
        generate([(0, 1), (0, 1, 2)])


def test_budget_exceeded_reports_partial():
    with pytest.raises(BudgetExceeded) as info:
        generate(S4_GENS, budget=10)
    assert info.value.partial > 10


def test_element_order():
    assert element_order((1, 2, 0, 4, 3)) == 6
    assert element_order((0, 1, 2)) == 1


def test_subgroup_rejects_non_closed():
    G = generate(S4_GENS)
    with pytest.raises(NotSubgroup):
        subgroup(G, [(0, 1, 2, 3), (1, 0, 2, 3), (0, 2, 1, 3)])
    with pytest.raises(NotSubgroup):
        subgroup(G, [(0, 1, 2, 3, 4)])


@pytest.mark.parametrize("gens, cls", [(S4_GENS, None), (D4_GENS, 2), ([(1, 2, 3, 0)], 1), ([], 0)])
def test_nilpotency_class(gens, cls):
    G = generate(gens, degree=4)
    assert nilpotency_class(G) == cls


@pytest.mark.parametrize("name", ["D4", "Q8", "S3", "ex6", "Z3xD4", "L5"])
def test_lower_central_series_matches_brute_force(name):
    M = mlt(corpus.load(name))
    got = [H.as_set() for H in lower_central_series(M)]
    assert got == brute_lower_central(M)


@pytest.mark.parametrize("name", ["D4", "Q8", "ex6", "S3"])
def test_center_series_definition(name):
    M = mlt(corpus.load(name))
    Z = group_center(M)
    assert Z.as_set() == {g for g in M.elements if all(compose(g, h) == compose(h, g) for h in M.elements)}
    series = center_series(M)
    # the upper series reaches G exactly when the lower one reaches 1, and with the same length
    cls = nilpotency_class(M)
    if cls is None:
        assert series[-1].order < M.order
    else:
        assert len(series) - 1 == cls and series[-1] == M


@pytest.mark.parametrize("name", ["D4", "ex6", "S3"])
def test_normalizer_matches_brute_force(name):
    Q = corpus.load(name)
    M = mlt(Q)
    H = inn(Q)
    N = normalizer(M, H)
    assert N.as_set() == brute_normalizer(M, H)
    assert is_normal_subgroup(N, H)


def test_normal_closure_is_normal():
    G = generate(S4_GENS)
    N = normal_closure(G, [(1, 0, 3, 2)])
    assert N.order == 4 and is_normal_subgroup(G, N)


@pytest.mark.parametrize("name, expected", [("D4", 32), ("Q8", 32), ("S3", 36), ("Z3xD4", 96), ("Z6", 6)])
def test_mlt_order_of_groups(name, expected):
    """For a group G, |Mlt G| = |G| * |G / Z(G)|."""
    G = corpus.load(name)
    quo, _ = quotient(G, center(G))
    assert G.order * quo.order == expected
    assert mlt(G).order == expected


def test_inn_is_identity_stabilizer(ex6):
    M, I = mlt(ex6), inn(ex6)
    assert (M.order, I.order) == (24, 4)
    assert I == point_stabilizer(M, 0)


@settings(max_examples=25, deadline=None)
@given(loops(max_order=6), st.integers(0, 5))
def test_orbit_stabilizer(Q, pt):
    pt %= Q.order
    M = mlt(Q)
    assert len(point_orbit(M, pt)) * point_stabilizer(M, pt).order == M.order


def test_sylow_parts_of_z3xd4():
    M = mlt(corpus.load("Z3xD4"))
    P, R = sylow_subgroup(M, 2), sylow_complement(M, 2)
    assert (P.order, R.order) == (32, 3)
    assert sylow_subgroup(M, 3).order == 3
    assert P.as_set() & R.as_set() == {M.identity}
    assert is_normal_subgroup(M, P) and is_normal_subgroup(M, R)


def test_sylow_requires_nilpotent(ex6):
    with pytest.raises(NotNilpotent):
        sylow_subgroup(mlt(ex6), 2)
    with pytest.raises(NotNilpotent):
        sylow_complement(mlt(ex6), 3)


def test_is_p_group():
    assert is_p_group(mlt(corpus.load("D4"))) == (True, 2)
    assert is_p_group(mlt(corpus.load("Z6")))[0] is False
    assert is_p_group(PermGroup(2, [], [(0, 1)])) == (True, None)


def test_commutator_convention():
    g, h = (1, 0, 2), (0, 2, 1)
    assert commutator(g, h) == compose(invert(g), compose(invert(h), compose(g, h)))
    assert all(commutator(a, a) == (0, 1, 2) for a in itertools.permutations(range(3)))


def test_normalizer_of_transposition_in_s3():
    S3 = corpus.load("S3")
    M = generate([tuple(S3.mul(a, x) for x in range(6)) for a in range(6)])  # left regular action
    assert M.order == 6
    s = next(g for g in M.elements if element_order(g) == 2)
    H = generate([s])
    assert normalizer(M, H).order == 2
    assert normalizer(M, M) == M


def test_center_series_of_d4_regular():
    D4 = corpus.load("D4")
    G = generate([tuple(D4.mul(a, x) for x in range(8)) for a in range(8)])
    assert [Z.order for Z in center_series(G)] == [1, 2, 8]
    assert nilpotency_class(G) == 2


@pytest.mark.parametrize("name", ["ex6", "D4", "Z3xD4"])
def test_generate_idempotent_and_lower_series_normal(name):
    M = mlt(corpus.load(name))
    assert generate(list(M.elements)).as_set() == M.as_set()
    series = lower_central_series(M)
    for a, b in zip(series, series[1:]):
        assert b.issubset(a)
    assert all(is_normal_subgroup(M, H) for H in series)


def test_sylow_examples():
    M = mlt(corpus.load("Z6"))
    assert sylow_subgroup(M, 2).order == 2
    P = mlt(corpus.load("D4"))
    assert sylow_subgroup(P, 2) == P and sylow_complement(P, 2).order == 1


def test_orbits():
    M = mlt(corpus.load("ex6"))
    assert point_orbit(M, 0) == frozenset(range(6))
    assert point_orbit(PermGroup(4, [], [(0, 1, 2, 3)]), 2) == {2}


@pytest.mark.parametrize("name", ["Z5", "Z2xZ4", "Z8"])
def test_abelian_mlt(name):
    Q = corpus.load(name)
    assert mlt(Q).order == Q.order and inn(Q).order == 1
