from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttour.algorithms import (
    GUARANTEE,
    TourError,
    check_tour,
    combined,
    modified_cost,
    ratio,
    reconnect,
    run_pipeline,
)
from ttour.decompose import TreeCombination
from ttour.oracle import generate


def ids(inst, *names):
    return frozenset(inst.eidx(n) for n in names)


def test_modified_cost_examples(P3, P4C):
    pipe = run_pipeline(P4C)
    cS = modified_cost(P4C, pipe.comb.trees[0], pipe.family, pipe.lonely[0])
    assert cS[P4C.eidx("ad")] == 7 and cS[P4C.eidx("ab")] == 1
    pipe = run_pipeline(P3)
    assert modified_cost(P3, pipe.comb.trees[0], pipe.family, pipe.lonely[0]) == [1, 1]


def test_reconnect_examples(P3, P4C):
    assert reconnect(P3, ids(P3, "ab", "bc")) == frozenset()
    assert reconnect(P4C, ids(P4C, "ab", "cd")) == ids(P4C, "bc")
    R = reconnect(P4C, frozenset())
    assert P4C.cost(R) == 3 and len(R) == 3


@pytest.mark.parametrize("name,cost", [("P3", 2), ("K2", 1), ("K3", 3), ("P4C", 3)])
def test_fixture_tours(name, cost, request):
    inst = request.getfixturevalue(name)
    pipe = run_pipeline(inst)
    assert pipe.bomc.cost == pipe.delete.cost == pipe.best.cost == cost
    assert ratio(pipe.best.cost, pipe.lp.value) == 1
    assert combined(inst).cost == cost


def test_fixture_join_details(P3, P4C):
    pipe = run_pipeline(P4C)
    cand = pipe.delete.candidates[0]
    assert cand.base == frozenset()
    assert cand.join.edges == ids(P4C, "ab", "bc", "cd") and cand.join.cost == 3
    assert cand.reconnect == frozenset()
    pipe = run_pipeline(P3)
    assert pipe.bomc.candidates[0].join.edges == frozenset()
    assert pipe.bomc.edges == Counter({0: 1, 1: 1})


def test_symmetric_k3_every_tree_costs_three(K3):
    trees = [ids(K3, "ab", "bc"), ids(K3, "bc", "ca"), ids(K3, "ab", "ca")]
    pipe = run_pipeline(K3, comb=TreeCombination(trees, [Fraction(1, 3)] * 3))
    assert [c.cost for c in pipe.bomc.candidates] == [3, 3, 3]
    assert [c.cost for c in pipe.delete.candidates] == [3, 3, 3]


def test_check_tour_rejects(P3):
    with pytest.raises(TourError):
        check_tour(P3, Counter({0: 1}))
    with pytest.raises(TourError):
        check_tour(P3, Counter({0: 2, 1: 2}))


def test_ratio_zero_lp(P3):
    assert ratio(Fraction(0), Fraction(0)) is None


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 7), half_t=st.integers(0, 3),
       density=st.floats(0, 0.8))
def test_guarantee_and_tour_validity(seed, n, half_t, density):
    inst = generate(seed, n, density, min(2 * half_t, n - n % 2))
    pipe = run_pipeline(inst)
    for tour in (pipe.bomc, pipe.delete):
        check_tour(inst, tour.edges)
        assert tour.cost == inst.cost(tour.edges)
    assert pipe.best.cost == min(pipe.bomc.cost, pipe.delete.cost)
    assert pipe.best.cost <= GUARANTEE * pipe.lp.value
    for cand in pipe.delete.candidates:
        assert all(a >= b for a, b in zip(cand.modified_cost, inst.costs))
        assert inst.cost(cand.join.edges) + 2 * inst.cost(cand.reconnect) <= cand.join.cost
