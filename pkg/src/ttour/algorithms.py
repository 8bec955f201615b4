"""The two tour algorithms and the cheaper-of-both combination."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .cuts import LonelyInfo, NarrowCut, lonely_classification, lonely_vectors, narrow_cuts
from .decompose import (
    Aggregates,
    TreeCombination,
    TreeStructure,
    aggregate_vectors,
    decompose,
    tree_structure,
)
from .graph import EdgeVector, Instance, _UnionFind, is_connected, odd_mask
from .lp import LpSolution, solve_lp
from .tjoin import JoinResult, min_join

GUARANTEE = Fraction(11, 7)


class TourError(AssertionError):
    """A constructed tour is not a T-tour, or a per-tree guarantee failed."""


@dataclass
class Candidate:
    tree: int
    base: frozenset[int]  # S for best-of-many, F_S = S - L_S for deletion
    targets: int  # vertex mask of odd(base) xor T
    join: JoinResult  # cost field is under the join costs (c or c^S)
    reconnect: frozenset[int]
    edges: Counter
    cost: Fraction
    modified_cost: list[Fraction] | None = None


@dataclass
class Tour:
    edges: Counter
    cost: Fraction
    algorithm: str
    tree: int
    candidates: list[Candidate] = field(default_factory=list)

    def edge_ids(self, inst: Instance) -> dict[str, int]:
        return {inst.edges[k].id: mult for k, mult in sorted(self.edges.items()) if mult}


def check_tour(inst: Instance, edges: Counter) -> None:
    if odd_mask(inst, edges) != inst.t_mask:
        raise TourError("tour has the wrong odd-degree set")
    if not is_connected(inst, edges):
        raise TourError("tour does not connect all vertices")


def _pick(candidates: list[Candidate], algorithm: str) -> Tour:
    best = min(candidates, key=lambda c: (c.cost, c.tree))
    return Tour(best.edges, best.cost, algorithm, best.tree, candidates)


def best_of_many_christofides(inst: Instance, comb: TreeCombination) -> Tour:
    """S plus a cheapest (odd(S) xor T)-join for every tree; keep the cheapest."""
    candidates = []
    for i, S in enumerate(comb.trees):
        targets = odd_mask(inst, S) ^ inst.t_mask
        J = min_join(inst, targets)
        edges = Counter(S)
        edges.update(J.edges)
        check_tour(inst, edges)
        candidates.append(Candidate(i, S, targets, J, frozenset(), edges, inst.cost(edges)))
    return _pick(candidates, "bomc")


def modified_cost(inst: Instance, S, family: list[NarrowCut], info: LonelyInfo) -> list[Fraction]:
    """c^S(e) = c(e) + 2 (sum - max) of c(S & C) over lonely cuts C of S containing e."""
    S = frozenset(S)
    out = []
    for k in range(inst.m):
        vals = [inst.costs[info.edge_at[i]] for i in info.cuts if k in family[i].cut.edges]
        extra = 2 * (sum(vals, Fraction(0)) - max(vals, default=Fraction(0)))
        out.append(inst.costs[k] + extra)
        if out[k] < inst.costs[k] or (k in S and out[k] != inst.costs[k]):
            raise TourError(f"modified cost invariant broken on edge {inst.edges[k].id}")
    return out


def reconnect(inst: Instance, F) -> frozenset[int]:
    """Cheapest edge set connecting (V, F): minimum spanning forest over F's components."""
    uf = _UnionFind(inst.n)
    for k in F:
        uf.union(inst.us[k], inst.vs[k])
    R = []
    for k in sorted(range(inst.m), key=lambda k: (inst.costs[k], k)):
        if uf.union(inst.us[k], inst.vs[k]):
            R.append(k)
    if len({uf.find(v) for v in range(inst.n)}) != 1:
        raise TourError("graph cannot be reconnected")
    return frozenset(R)


def lonely_edge_deletion(inst: Instance, comb: TreeCombination, family: list[NarrowCut],
                         lonely: list[LonelyInfo]) -> Tour:
    """Delete lonely edges, correct parity under c^S, reconnect with doubled edges."""
    candidates = []
    for i, (S, info) in enumerate(zip(comb.trees, lonely)):
        F = S - info.edges
        targets = odd_mask(inst, F) ^ inst.t_mask
        cS = modified_cost(inst, S, family, info)
        J = min_join(inst, targets, cS)
        R = reconnect(inst, F | J.edges)
        edges = Counter(F)
        edges.update(J.edges)
        for k in R:
            edges[k] += 2
        check_tour(inst, edges)
        cost = inst.cost(edges)
        # the reconnection bound: c(J) + 2 c(R) <= c^S(J)
        if inst.cost(J.edges) + 2 * inst.cost(R) > J.cost:
            raise TourError(f"reconnection bound fails for tree {i}")
        candidates.append(Candidate(i, F, targets, J, R, edges, cost, cS))
    return _pick(candidates, "delete")


@dataclass
class Pipeline:
    inst: Instance
    lp: LpSolution
    comb: TreeCombination
    structures: list[TreeStructure]
    family: list[NarrowCut]
    lonely: list[LonelyInfo]
    vC: list[EdgeVector]
    aggregates: Aggregates
    bomc: Tour
    delete: Tour

    @property
    def best(self) -> Tour:
        # ties go to best-of-many
        return self.delete if self.delete.cost < self.bomc.cost else self.bomc

    def tour(self, algorithm: str = "combined") -> Tour:
        return {"bomc": self.bomc, "delete": self.delete, "combined": self.best}[algorithm]

    @property
    def x_star(self) -> EdgeVector:
        return self.lp.x_star


def ratio(cost: Fraction, lp_value: Fraction) -> Fraction | None:
    """cost / LP value; None when the LP value is 0 (then cost must be 0 too)."""
    if lp_value == 0:
        return None
    return Fraction(cost) / lp_value


def guarantee_holds(cost: Fraction, lp_value: Fraction) -> bool:
    return cost <= GUARANTEE * lp_value


def run_pipeline(inst: Instance, lp: LpSolution | None = None,
                 comb: TreeCombination | None = None) -> Pipeline:
    """Run the whole pipeline up to both tours."""
    lp = solve_lp(inst) if lp is None else lp
    comb = decompose(inst, lp) if comb is None else comb
    structures = [tree_structure(inst, S) for S in comb.trees]
    family = narrow_cuts(inst, lp)
    lonely = lonely_classification(inst, family, comb)
    vC = lonely_vectors(inst, family, comb, lonely)
    agg = aggregate_vectors(inst, comb, structures, [info.edges for info in lonely], lp.x_star)
    tour1 = best_of_many_christofides(inst, comb)
    tour2 = lonely_edge_deletion(inst, comb, family, lonely)
    return Pipeline(inst, lp, comb, structures, family, lonely, vC, agg, tour1, tour2)


def combined(inst: Instance) -> Tour:
    """The cheaper of the two algorithms' tours (ties: best-of-many)."""
    pipe = run_pipeline(inst)
    if not guarantee_holds(pipe.best.cost, pipe.lp.value):
        raise TourError("tour exceeds 11/7 times the LP value")
    return pipe.best


__all__ = [
    "GUARANTEE",
    "Candidate",
    "Pipeline",
    "Tour",
    "TourError",
    "best_of_many_christofides",
    "check_tour",
    "combined",
    "guarantee_holds",
    "lonely_edge_deletion",
    "modified_cost",
    "ratio",
    "reconnect",
    "run_pipeline",
]
