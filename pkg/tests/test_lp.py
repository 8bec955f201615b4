import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from ttour.graph import Instance, cut_edges, partition_crossing, weigh
from ttour.lp import (
    is_lp_feasible,
    min_partition_slack,
    separate_even_cut,
    separate_partition,
    set_partitions,
    solve_lp,
)
from ttour.oracle import generate, opt_tour
from conftest import F


def scipy_lp_value(inst):
    """Independent float route: every constraint enumerated naively, HiGHS solve."""
    n, rows, rhs = inst.n, [], []
    for mask in range(1, (1 << n) - 1):
        if bin(mask & inst.t_mask).count("1") % 2 == 0:
            rows.append([1.0 if ((mask >> a) ^ (mask >> b)) & 1 else 0.0 for a, b in zip(inst.us, inst.vs)])
            rhs.append(2.0)
    for blocks in set_partitions(n):
        label = {v: i for i, b in enumerate(blocks) for v in range(n) if (b >> v) & 1}
        rows.append([1.0 if label[a] != label[b] else 0.0 for a, b in zip(inst.us, inst.vs)])
        rhs.append(len(blocks) - 1.0)
    res = linprog(np.array([float(c) for c in inst.costs]), A_ub=-np.array(rows), b_ub=-np.array(rhs),
                  method="highs")
    return res.fun


def test_fixture_values(P3, K2, K3, P4C):
    sol = solve_lp(P3)
    assert sol.value == 2 and sol.x_star == F(1, 1)
    assert solve_lp(K2).value == 1 and solve_lp(K2).x_star == F(1)
    assert solve_lp(K3).value == 3
    assert solve_lp(P4C).value == 3


@pytest.mark.parametrize("name", ["P3", "K2", "K3", "P4C", "STAR"])
def test_fixture_values_match_independent_solver(name, request):
    inst = request.getfixturevalue(name)
    assert float(solve_lp(inst).value) == pytest.approx(scipy_lp_value(inst), abs=1e-9)


def test_separate_even_cut_examples(K3, P3, K2):
    cut = separate_even_cut(K3, F("2/3", "2/3", "2/3"))
    assert cut is not None and len(cut.side) in (1, 2)
    assert weigh(F("2/3", "2/3", "2/3"), cut.edges) == Fraction(4, 3)
    # a K3 singleton cut: the canonical side of {a} is {b, c}
    assert cut in {cut_edges(K3, v) for v in "abc"}
    assert separate_even_cut(P3, F(1, 1)) is None
    assert separate_even_cut(K2, F(1)) is None


def test_separate_partition_examples(P3, K3):
    part = separate_partition(P3, F("1/2", 1))
    assert part is not None
    # {a},{b,c} and the all-singletons partition are both violated by 1/2
    blocks = {frozenset(b) for b in part.blocks}
    assert blocks in ({frozenset("a"), frozenset("bc")}, {frozenset(v) for v in "abc"})
    x = F("1/2", 1)
    assert weigh(x, partition_crossing(P3, part)) - (len(part) - 1) == Fraction(-1, 2)
    assert separate_partition(K3, F("2/3", "2/3", "2/3")) is None
    assert separate_partition(P3, F(1, 1)) is None


def test_partition_separation_matches_enumeration():
    rng = random.Random(5)
    for seed in range(25):
        inst = generate(seed, rng.randint(2, 6), 0.5, 0)
        x = [Fraction(rng.randint(0, 6), rng.randint(1, 4)) for _ in range(inst.m)]
        slack, _ = min_partition_slack(inst, x)
        brute = min(
            sum(xv for k, xv in enumerate(x)
                if not any((b >> inst.us[k]) & 1 and (b >> inst.vs[k]) & 1 for b in blocks))
            - (len(blocks) - 1)
            for blocks in set_partitions(inst.n))
        assert slack == brute


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 6), t=st.integers(0, 3), density=st.floats(0, 0.7))
def test_rowgen_is_optimal_and_feasible(seed, n, t, density):
    inst = generate(seed, n, density, min(2 * t, n - n % 2))
    sol = solve_lp(inst)
    assert is_lp_feasible(inst, sol.x_star)
    assert sol.value == solve_lp(inst, method="enumerate").value
    assert float(sol.value) == pytest.approx(scipy_lp_value(inst), abs=1e-7)
    if inst.m <= 10:
        assert sol.value <= opt_tour(inst).opt_tour_cost


def test_value_invariant_under_relabelling():
    rng = random.Random(11)
    for seed in range(15):
        inst = generate(seed, rng.randint(3, 7), 0.5, 2)
        names = list(inst.vertices)
        shuffled = names[:]
        rng.shuffle(shuffled)
        rename = dict(zip(names, shuffled))
        edges = [(f"x{k}", rename[e.u], rename[e.v], e.cost) for k, e in enumerate(inst.edges)]
        rng.shuffle(edges)
        other = Instance(shuffled, edges, [rename[t] for t in inst.terminals])
        assert solve_lp(other).value == solve_lp(inst).value


def test_active_constraints_are_tight(P4C):
    sol = solve_lp(P4C)
    assert sol.active_constraints
    for con in sol.active_constraints:
        assert weigh(sol.x_star, con.edges) == con.rhs
