"""Spanning-tree decomposition of x* and the per-tree T-join split.

x* lies in the connector polyhedron, so it dominates a convex combination
of spanning trees. The combination is found by column generation: the
master LP packs trees under capacities x*, and the pricing step is a
minimum spanning tree under the master's dual edge prices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph import EdgeVector, Instance, _UnionFind, is_spanning_tree, odd_mask
from .lp import LpSolution
from .simplex import maximize


class DecompositionError(ArithmeticError):
    """x* does not dominate a convex combination of spanning trees."""


@dataclass
class TreeCombination:
    trees: list[frozenset[int]]
    weights: list[Fraction]
    columns_generated: int = 0

    def __iter__(self):
        return iter(zip(self.trees, self.weights))

    def __len__(self) -> int:
        return len(self.trees)

    def tree_vector(self, m: int) -> EdgeVector:
        """sum_S p_S chi^S."""
        vec = [Fraction(0)] * m
        for S, p in self:
            for k in S:
                vec[k] += p
        return vec


@dataclass(frozen=True)
class TreeStructure:
    S: frozenset[int]
    I: frozenset[int]  # the unique T-join inside S
    J: frozenset[int]  # S minus I, the (T xor odd(S))-join inside S


@dataclass
class Aggregates:
    I_p: EdgeVector
    J_p: EdgeVector
    L_p: EdgeVector
    # edges where x* exceeds I_p + J_p (x* only dominates the tree combination)
    slack_edges: list[int] = field(default_factory=list)


def minimum_spanning_tree(inst: Instance, weights: list, allowed=None) -> frozenset[int]:
    """Kruskal with ties broken by edge index; ``allowed`` restricts the edges."""
    pool = range(inst.m) if allowed is None else allowed
    uf = _UnionFind(inst.n)
    tree = []
    for k in sorted(pool, key=lambda k: (weights[k], k)):
        if uf.union(inst.us[k], inst.vs[k]):
            tree.append(k)
    if len(tree) != inst.n - 1:
        raise DecompositionError("allowed edges do not span the graph")
    return frozenset(tree)


def decompose(inst: Instance, lp: LpSolution | EdgeVector, max_columns: int = 10_000) -> TreeCombination:
    """Trees S with weights p_S > 0 summing to 1 and sum p_S chi^S <= x*."""
    x = lp.x_star if isinstance(lp, LpSolution) else list(lp)
    if inst.n == 1:
        return TreeCombination([frozenset()], [Fraction(1)])
    support = [k for k in range(inst.m) if x[k] > 0]
    try:
        pool = [minimum_spanning_tree(inst, inst.costs, support)]
    except DecompositionError:
        raise DecompositionError("support of x* is not connected") from None
    seen = set(pool)
    while True:
        rows = [[1 if k in S else 0 for S in pool] for k in support]
        res = maximize([1] * len(pool), rows, [x[k] for k in support])
        if res.value >= 1:
            break
        prices = [Fraction(0)] * inst.m
        for row, k in enumerate(support):
            prices[k] = res.dual[row]
        tree = minimum_spanning_tree(inst, prices, support)
        if sum((prices[k] for k in tree), Fraction(0)) >= 1:
            raise DecompositionError(
                f"x* packs only {res.value} spanning trees; it is not in the connector polyhedron")
        if tree in seen or len(pool) >= max_columns:
            raise DecompositionError("column generation stalled")
        seen.add(tree)
        pool.append(tree)
    trees, weights = [], []
    for S, p in zip(pool, res.primal):
        if p > 0:
            trees.append(S)
            weights.append(p / res.value)
    comb = TreeCombination(trees, weights, columns_generated=len(pool))
    check_combination(inst, x, comb)
    return comb


def check_combination(inst: Instance, x: EdgeVector, comb: TreeCombination) -> None:
    if sum(comb.weights, Fraction(0)) != 1:
        raise DecompositionError("tree weights do not sum to 1")
    if any(p <= 0 for p in comb.weights):
        raise DecompositionError("tree weights must be positive")
    for S in comb.trees:
        if not is_spanning_tree(inst, S):
            raise DecompositionError(f"not a spanning tree: {inst.ids(S)}")
    for k, load in enumerate(comb.tree_vector(inst.m)):
        if load > x[k]:
            raise DecompositionError(f"tree combination exceeds x* on edge {inst.edges[k].id}")


def tree_structure(inst: Instance, S) -> TreeStructure:
    """Split a spanning tree into its T-join I_S and the rest J_S.

    A tree edge belongs to I_S exactly when its fundamental cut is a T-cut,
    i.e. the subtree below it holds an odd number of terminals.
    """
    S = frozenset(S)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(inst.n)]
    for k in S:
        adj[inst.us[k]].append((inst.vs[k], k))
        adj[inst.vs[k]].append((inst.us[k], k))
    parent_edge = [-1] * inst.n
    order = [0]
    visited = [False] * inst.n
    visited[0] = True
    for v in order:
        for w, k in adj[v]:
            if not visited[w]:
                visited[w] = True
                parent_edge[w] = k
                order.append(w)
    parity = [(inst.t_mask >> v) & 1 for v in range(inst.n)]
    I = set()
    for v in reversed(order[1:]):
        k = parent_edge[v]
        if parity[v]:
            I.add(k)
        up = inst.us[k] if inst.vs[k] == v else inst.vs[k]
        parity[up] ^= parity[v]
    I = frozenset(I)
    if odd_mask(inst, I) != inst.t_mask:
        raise ArithmeticError("I_S is not a T-join")
    return TreeStructure(S, I, S - I)


def aggregate_vectors(inst: Instance, comb: TreeCombination, structures: list[TreeStructure],
                      lonely_edges: list[frozenset[int]], x: EdgeVector | None = None) -> Aggregates:
    """I_p, J_p, L_p as p-weighted sums of per-tree indicator vectors."""
    m = inst.m
    I_p, J_p, L_p = ([Fraction(0)] * m for _ in range(3))
    for (S, p), st, L in zip(comb, structures, lonely_edges):
        for k in st.I:
            I_p[k] += p
        for k in st.J:
            J_p[k] += p
        for k in L:
            L_p[k] += p
    if any(a > b for a, b in zip(L_p, I_p)):
        raise ArithmeticError("L_p exceeds I_p")
    slack = [] if x is None else [k for k in range(m) if I_p[k] + J_p[k] != x[k]]
    return Aggregates(I_p, J_p, L_p, slack)

