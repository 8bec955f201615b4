"""Both kernel backends against direct reference computations and each other."""

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttour import _pykernels, kernels
from conftest import BACKENDS


@st.composite
def small_graphs(draw, max_n=6, max_m=8, max_w=20):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(1, max_m))
    us, vs = [], []
    for _ in range(m):
        a = draw(st.integers(0, n - 1))
        b = draw(st.integers(0, n - 2))
        us.append(a)
        vs.append(b if b < a else b + 1)
    w = draw(st.lists(st.integers(0, max_w), min_size=m, max_size=m))
    return n, us, vs, w


def ref_loads(n, us, vs, w):
    return [sum(wt for a, b, wt in zip(us, vs, w) if ((mask >> a) ^ (mask >> b)) & 1)
            for mask in range(1 << n)]


def ref_odd(n, us, vs, mults):
    deg = [0] * n
    for a, b, k in zip(us, vs, mults):
        deg[a] += k
        deg[b] += k
    return sum(1 << v for v in range(n) if deg[v] % 2)


def ref_spans(n, us, vs, mults):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for a, b, k in zip(us, vs, mults):
        if k:
            parent[find(a)] = find(b)
    return len({find(v) for v in range(n)}) == 1


def ref_partitions(n):
    def rec(i, blocks):
        if i == n:
            yield [sum(1 << v for v in b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


@pytest.mark.parametrize("impl", BACKENDS)
@settings(max_examples=60, deadline=None)
@given(g=small_graphs())
def test_subset_loads_match_reference(impl, g):
    assert impl.subset_loads(*g) == ref_loads(*g)


@pytest.mark.parametrize("impl", BACKENDS)
@settings(max_examples=40, deadline=None)
@given(g=small_graphs(max_n=5), offset=st.integers(0, 40))
def test_min_partition_matches_enumeration(impl, g, offset):
    n = g[0]
    loads = ref_loads(*g)
    best = min(sum(loads[b] - offset for b in blocks) for blocks in ref_partitions(n))
    value, blocks = impl.min_partition(n, loads, offset)
    assert value == best
    assert sorted(blocks) == blocks and sum(blocks) == (1 << n) - 1
    assert sum(loads[b] - offset for b in blocks) == value


@pytest.mark.parametrize("impl", BACKENDS)
@settings(max_examples=40, deadline=None)
@given(g=small_graphs(), data=st.data())
def test_join_bruteforce(impl, g, data):
    n, us, vs, w = g
    target = data.draw(st.sampled_from([ref_odd(n, us, vs, [(s >> e) & 1 for e in range(len(us))])
                                        for s in range(1 << len(us))]))
    cost, mask = impl.join_bruteforce(n, us, vs, w, target)
    ref = min(sum(w[e] for e in range(len(us)) if (s >> e) & 1)
              for s in range(1 << len(us)) if ref_odd(n, us, vs, [(s >> e) & 1 for e in range(len(us))]) == target)
    assert cost == ref
    assert ref_odd(n, us, vs, [(mask >> e) & 1 for e in range(len(us))]) == target


@pytest.mark.parametrize("impl", BACKENDS)
@settings(max_examples=30, deadline=None)
@given(g=small_graphs(max_n=5, max_m=7), data=st.data())
def test_tour_bruteforce_matches_mixed_radix_enumeration(impl, g, data):
    n, us, vs, w = g
    t_bits = data.draw(st.lists(st.booleans(), min_size=n, max_size=n))
    t = sum(1 << v for v, b in enumerate(t_bits) if b)
    if bin(t).count("1") % 2:
        t ^= 1
    feasible = []
    for mults in product(range(3), repeat=len(us)):
        if ref_odd(n, us, vs, mults) == t and ref_spans(n, us, vs, mults):
            feasible.append((sum(k * x for k, x in zip(mults, w)), list(mults)))
    cost, mults = impl.tour_bruteforce(n, us, vs, w, t)
    if not feasible:
        assert (cost, mults) == (-1, None)
    else:
        assert (cost, mults) == min(feasible)


@pytest.mark.parametrize("impl", BACKENDS)
@settings(max_examples=40, deadline=None)
@given(k=st.sampled_from([0, 2, 4, 6]), data=st.data())
def test_matching_dp_matches_enumeration(impl, k, data):
    d = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            d[i][j] = d[j][i] = data.draw(st.integers(0, 30))
    flat = [d[i][j] for i in range(k) for j in range(k)]

    def best(rest):
        if not rest:
            return 0
        i = rest[0]
        return min(d[i][j] + best([r for r in rest[1:] if r != j]) for j in rest[1:])

    cost, mate = impl.matching_dp(k, flat)
    assert cost == best(list(range(k)))
    assert all(mate[mate[i]] == i and mate[i] != i for i in range(k))
    assert sum(d[i][mate[i]] for i in range(k)) == 2 * cost


def test_backends_agree_bitwise():
    if len(BACKENDS) < 2:
        pytest.skip("compiled kernels unavailable")
    c = BACKENDS[1].values[0]
    us, vs, w = [0, 1, 2, 0, 1], [1, 2, 3, 3, 3], [3, 1, 4, 1, 5]
    assert c.subset_loads(4, us, vs, w) == _pykernels.subset_loads(4, us, vs, w)
    loads = c.subset_loads(4, us, vs, w)
    assert c.min_partition(4, loads, 6) == _pykernels.min_partition(4, loads, 6)
    assert c.tour_bruteforce(4, us, vs, w, 0b0101) == _pykernels.tour_bruteforce(4, us, vs, w, 0b0101)


def test_dispatch_falls_back_on_huge_weights():
    huge = 1 << 70
    loads = kernels.subset_loads(2, [0], [1], [huge])
    assert loads == [0, huge, huge, 0]


def test_backend_name():
    assert kernels.BACKEND in {"cython", "python"}
