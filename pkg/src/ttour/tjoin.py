"""Minimum-cost T'-joins and the T'-join polyhedron membership test.

With nonnegative costs, a cheapest T'-join is the symmetric difference of
shortest paths along a minimum-weight perfect matching of T' in the
shortest-path metric. Costs need not satisfy the triangle inequality.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .graph import (
    Cut,
    EdgeVector,
    Instance,
    canonical_masks,
    cut_from_mask,
    odd_mask,
    scale,
    subset_loads,
    weigh,
)


@dataclass(frozen=True)
class JoinResult:
    edges: frozenset[int]
    cost: Fraction


def target_mask(inst: Instance, targets: Iterable[str] | int) -> int:
    if isinstance(targets, int):
        return targets
    return inst.mask_of(targets)


def shortest_paths(inst: Instance, costs: list[Fraction], source: int) -> tuple[list, list[int]]:
    """Dijkstra distances and predecessor edge indices from one vertex."""
    dist: list[Fraction | None] = [None] * inst.n
    pred = [-1] * inst.n
    dist[source] = Fraction(0)
    done = [False] * inst.n
    heap = [(Fraction(0), source)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for k in inst.incident[v]:
            w = inst.vs[k] if inst.us[k] == v else inst.us[k]
            nd = d + costs[k]
            if not done[w] and (dist[w] is None or nd < dist[w]):
                dist[w] = nd
                pred[w] = k
                heapq.heappush(heap, (nd, w))
    return dist, pred


def _path(inst: Instance, pred: list[int], source: int, target: int) -> list[int]:
    path = []
    v = target
    while v != source:
        k = pred[v]
        path.append(k)
        v = inst.vs[k] if inst.us[k] == v else inst.us[k]
    return path


def min_join(inst: Instance, targets: Iterable[str] | int,
             costs: list[Fraction] | None = None) -> JoinResult:
    """A cheapest edge set J with odd(J) = targets under ``costs`` (default c)."""
    costs = inst.costs if costs is None else [Fraction(c) for c in costs]
    if any(c < 0 for c in costs):
        raise ValueError("join costs must be nonnegative")
    tmask = target_mask(inst, targets)
    terms = [v for v in range(inst.n) if (tmask >> v) & 1]
    if len(terms) % 2:
        raise ValueError("target set must have even cardinality")
    if not terms:
        return JoinResult(frozenset(), Fraction(0))
    k = len(terms)
    trees = [shortest_paths(inst, costs, s) for s in terms]
    dist = [trees[i][0][terms[j]] for i in range(k) for j in range(k)]
    ints, _ = scale(dist)
    _, mate = kernels.matching_dp(k, ints)
    counts: dict[int, int] = {}
    for i, j in enumerate(mate):
        if i < j:
            for e in _path(inst, trees[i][1], terms[i], terms[j]):
                counts[e] = counts.get(e, 0) ^ 1
    J = frozenset(e for e, c in counts.items() if c)
    if odd_mask(inst, J) != tmask:
        raise ArithmeticError("join construction lost parity")
    return JoinResult(J, weigh(costs, J))


def join_polyhedron_violation(inst: Instance, y: EdgeVector,
                              targets: Iterable[str] | int) -> Cut | None:
    """A cut U with |U & T'| odd and y(delta(U)) < 1, most violated first; None if y is in the polyhedron."""
    if any(v < 0 for v in y):
        raise ValueError("y must be nonnegative")
    tmask = target_mask(inst, targets)
    loads, denom = subset_loads(inst, y)
    worst = None
    for mk in canonical_masks(inst.n):
        if loads[mk] < denom and bin(mk & tmask).count("1") % 2:
            if worst is None or loads[mk] < loads[worst]:
                worst = mk
    return None if worst is None else cut_from_mask(inst, worst)


def odd_cut_loads(inst: Instance, y: EdgeVector, targets: Iterable[str] | int) -> list[tuple[Cut, Fraction]]:
    """Every T'-odd cut with its y-load; used in reports and tight-cut checks."""
    tmask = target_mask(inst, targets)
    loads, denom = subset_loads(inst, y)
    return [(cut_from_mask(inst, mk), Fraction(loads[mk], denom)) for mk in canonical_masks(inst.n)
            if bin(mk & tmask).count("1") % 2]
