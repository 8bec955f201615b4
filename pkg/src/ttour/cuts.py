"""Narrow cuts, their lonely structure per tree, and the vectors v^C.

A cut C is narrow when x*(C) < 2. For a tree S, a narrow cut with
|S & C| == 1 is lonely for S and its single tree edge is lonely at C.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .decompose import TreeCombination
from .graph import Cut, EdgeVector, Instance, canonical_masks, cut_from_mask, is_t_cut, subset_loads
from .lp import LpSolution


class CutStructureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class NarrowCut:
    cut: Cut
    load: Fraction  # x*(C)


@dataclass(frozen=True)
class LonelyInfo:
    """Lonely cuts (indices into the narrow family) and lonely edges of one tree."""

    cuts: tuple[int, ...]
    edges: frozenset[int]
    edge_at: dict  # narrow-cut index -> the lonely edge at that cut


def _x(lp) -> EdgeVector:
    return lp.x_star if isinstance(lp, LpSolution) else list(lp)


def narrow_cuts(inst: Instance, lp: LpSolution | EdgeVector) -> list[NarrowCut]:
    """All canonical cuts with x*(C) < 2, in side-mask order."""
    x = _x(lp)
    loads, denom = subset_loads(inst, x)
    family = []
    for mk in canonical_masks(inst.n):
        if loads[mk] < 2 * denom:
            cut = cut_from_mask(inst, mk)
            if not is_t_cut(inst, cut):
                raise CutStructureError(f"narrow cut {sorted(cut.side)} is not a T-cut; x* is not LP-feasible")
            load = Fraction(loads[mk], denom)
            if load < 1:
                raise CutStructureError(f"cut {sorted(cut.side)} has load {load} < 1")
            family.append(NarrowCut(cut, load))
    return family


def lonely_classification(inst: Instance, family: list[NarrowCut],
                          comb: TreeCombination) -> list[LonelyInfo]:
    """Lonely cuts and edges of every tree in the combination."""
    out = []
    for S in comb.trees:
        hits = [S & nc.cut.edges for nc in family]
        lonely = tuple(i for i, h in enumerate(hits) if len(h) == 1)
        edge_at = {i: next(iter(hits[i])) for i in lonely}
        edges = frozenset(edge_at.values())
        if len(edges) != len(lonely):
            raise CutStructureError("an edge is lonely at two different cuts")
        for i, h in enumerate(hits):
            if not h:
                raise CutStructureError("a spanning tree misses a cut")
            if len(h) == 2 and h <= edges:
                raise CutStructureError("narrow cut with two tree edges holds two lonely edges")
        out.append(LonelyInfo(lonely, edges, edge_at))
    return out


def lonely_mass(family: list[NarrowCut], comb: TreeCombination,
                lonely: list[LonelyInfo]) -> list[Fraction]:
    """For each narrow cut, the total weight of trees lonely at it."""
    mass = [Fraction(0)] * len(family)
    for p, info in zip(comb.weights, lonely):
        for i in info.cuts:
            mass[i] += p
    return mass


def lonely_vectors(inst: Instance, family: list[NarrowCut], comb: TreeCombination,
                   lonely: list[LonelyInfo]) -> list[EdgeVector]:
    """v^C = 1/(2 - x*(C)) * sum over trees lonely at C of p_S chi^(S & C)."""
    vecs = [[Fraction(0)] * inst.m for _ in family]
    for p, info in zip(comb.weights, lonely):
        for i, k in info.edge_at.items():
            vecs[i][k] += p
    for nc, vec in zip(family, vecs):
        factor = 1 / (2 - nc.load)
        for k in range(inst.m):
            vec[k] *= factor
        if sum((vec[k] for k in nc.cut.edges), Fraction(0)) < 1:
            raise CutStructureError(f"v^C(C) < 1 at cut {sorted(nc.cut.side)}: too few lonely trees")
    return vecs
