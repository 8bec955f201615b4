from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttour.algorithms import run_pipeline
from ttour.cuts import lonely_mass, narrow_cuts
from ttour.decompose import TreeCombination
from ttour.graph import cut_edges
from ttour.lp import solve_lp
from ttour.oracle import generate


def sides(family):
    return {frozenset(nc.cut.side) for nc in family}


def canon(inst, *us):
    return {frozenset(cut_edges(inst, u).side) for u in us}


def test_narrow_examples(P3, K3, P4C):
    fam = narrow_cuts(P3, solve_lp(P3))
    assert sides(fam) == canon(P3, ["a"], ["c"])
    assert [nc.load for nc in fam] == [1, 1]
    assert narrow_cuts(K3, solve_lp(K3)) == []
    fam = narrow_cuts(P4C, [Fraction(v) for v in (1, 1, 1, 0)])
    assert sides(fam) == canon(P4C, ["a"], ["d"], ["a", "b"])
    assert all(nc.load == 1 for nc in fam)


def test_lonely_examples(P3, P4C):
    pipe = run_pipeline(P3)
    assert len(pipe.lonely[0].cuts) == 2
    assert pipe.lonely[0].edges == frozenset({0, 1})
    pipe = run_pipeline(P4C)
    tree = frozenset(P4C.eidx(e) for e in ("ab", "bc", "cd"))
    assert pipe.comb.trees == [tree]
    assert len(pipe.lonely[0].cuts) == 3 and pipe.lonely[0].edges == tree


def test_k3_has_no_lonely_cuts(K3):
    third = Fraction(1, 3)
    trees = [frozenset(K3.eidx(a) for a in pair) for pair in (("ab", "bc"), ("bc", "ca"), ("ab", "ca"))]
    pipe = run_pipeline(K3, comb=TreeCombination(trees, [third] * 3))
    assert all(not info.cuts for info in pipe.lonely)


@pytest.mark.parametrize("name,side,edge", [("P3", "a", "ab"), ("K2", "a", "ab"), ("P4C", "ab", "bc")])
def test_v_examples(name, side, edge, request):
    inst = request.getfixturevalue(name)
    pipe = run_pipeline(inst)
    target = cut_edges(inst, list(side)).mask
    (idx,) = [i for i, nc in enumerate(pipe.family) if nc.cut.mask == target]
    expected = [Fraction(int(k == inst.eidx(edge))) for k in range(inst.m)]
    assert pipe.vC[idx] == expected


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 7), half_t=st.integers(0, 3),
       density=st.floats(0, 0.8))
def test_cut_identities(seed, n, half_t, density):
    inst = generate(seed, n, density, min(2 * half_t, n - n % 2))
    pipe = run_pipeline(inst)
    mass = lonely_mass(pipe.family, pipe.comb, pipe.lonely)
    for nc, lm in zip(pipe.family, mass):
        assert 1 <= nc.load < 2
        assert nc.load >= 2 - lm
        assert 1 - lm <= nc.load - 1
    L_p = [Fraction(0)] * inst.m
    for nc, v in zip(pipe.family, pipe.vC):
        for k in range(inst.m):
            L_p[k] += (2 - nc.load) * v[k]
    assert L_p == pipe.aggregates.L_p
    for info, st_ in zip(pipe.lonely, pipe.structures):
        assert info.edges <= st_.I
