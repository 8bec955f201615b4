"""The T-tour LP relaxation, solved exactly.

    min c(x)  s.t.  x(delta(U)) >= 2      for U with |T & U| even,
                    x(delta(W)) >= |W|-1  for every partition W of V,
                    x >= 0.

The LP is solved through its dual with the exact simplex: dual variables
are constraints, dual rows are edges, and the optimal x* is read off the
shadow prices of the edge rows. Constraints are generated lazily with two
exhaustive separation oracles, or materialised in full for small n.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .graph import (
    Cut,
    EdgeVector,
    Instance,
    InstanceError,
    Partition,
    canonical_masks,
    cut_from_mask,
    partition_crossing,
    partition_from_masks,
    subset_loads,
    weigh,
)
from .simplex import maximize

ENUMERATION_LIMIT = 10


@dataclass(frozen=True)
class Constraint:
    kind: str  # "cut" or "partition"
    edges: frozenset[int]
    rhs: int
    cut: Cut | None = None
    partition: Partition | None = None

    def describe(self, inst: Instance) -> dict:
        if self.kind == "cut":
            return {"kind": "cut", "side": sorted(self.cut.side), "rhs": self.rhs}
        return {"kind": "partition", "blocks": [sorted(b) for b in self.partition.blocks],
                "rhs": self.rhs}


@dataclass
class LpSolution:
    x_star: EdgeVector
    value: Fraction
    active_constraints: list[Constraint]
    rounds: int = 1
    method: str = "rowgen"

    def load(self, edges) -> Fraction:
        return weigh(self.x_star, edges)


def even_cut_constraint(inst: Instance, cut: Cut) -> Constraint:
    return Constraint("cut", cut.edges, 2, cut=cut)


def partition_constraint(inst: Instance, partition: Partition) -> Constraint:
    return Constraint("partition", partition_crossing(inst, partition), len(partition) - 1,
                      partition=partition)


def _is_even_side(inst: Instance, mask: int) -> bool:
    return bin(mask & inst.t_mask).count("1") % 2 == 0


def violated_even_cuts(inst: Instance, x: EdgeVector, limit: int | None = None) -> list[Cut]:
    """Even cuts with x(delta(U)) < 2, most violated first (ties: smaller side mask)."""
    if any(v < 0 for v in x):
        raise ValueError("x must be nonnegative")
    loads, denom = subset_loads(inst, x)
    bad = [(loads[mk], mk) for mk in canonical_masks(inst.n)
           if loads[mk] < 2 * denom and _is_even_side(inst, mk)]
    bad.sort()
    if limit is not None:
        bad = bad[:limit]
    return [cut_from_mask(inst, mk) for _, mk in bad]


def separate_even_cut(inst: Instance, x: EdgeVector) -> Cut | None:
    """A most violated even-cut constraint at x, or None if x satisfies all."""
    cuts = violated_even_cuts(inst, x, limit=1)
    return cuts[0] if cuts else None


def min_partition_slack(inst: Instance, x: EdgeVector) -> tuple[Fraction, Partition]:
    """min over partitions W of x(delta(W)) - (|W| - 1), with a minimiser.

    Uses x(delta(W)) = (1/2) sum_B x(delta(B)) and an exact subset DP over
    all partitions (3^n work), so the minimum is exhaustive.
    """
    if any(v < 0 for v in x):
        raise ValueError("x must be nonnegative")
    loads, denom = subset_loads(inst, x)
    total, blocks = kernels.min_partition(inst.n, loads, 2 * denom)
    return Fraction(total + 2 * denom, 2 * denom), partition_from_masks(inst, blocks)


def separate_partition(inst: Instance, x: EdgeVector) -> Partition | None:
    """A most violated partition constraint at x, or None (x is in the connector polyhedron)."""
    slack, partition = min_partition_slack(inst, x)
    return partition if slack < 0 else None


def set_partitions(n: int) -> Iterator[list[int]]:
    """All partitions of range(n) as sorted lists of block bitmasks."""
    labels = [0] * n

    def rec(i: int, nblocks: int):
        if i == n:
            blocks = [0] * nblocks
            for v, b in enumerate(labels):
                blocks[b] |= 1 << v
            yield blocks
            return
        for b in range(nblocks + 1):
            labels[i] = b
            yield from rec(i + 1, max(nblocks, b + 1))

    if n == 0:
        return
    labels[0] = 0
    yield from rec(1, 1)


def all_constraints(inst: Instance) -> list[Constraint]:
    """Every constraint of the LP, deduplicated by edge set keeping the largest rhs."""
    best: dict[frozenset[int], Constraint] = {}

    def offer(con: Constraint):
        old = best.get(con.edges)
        if old is None or con.rhs > old.rhs:
            best[con.edges] = con

    for mk in canonical_masks(inst.n):
        if _is_even_side(inst, mk):
            offer(even_cut_constraint(inst, cut_from_mask(inst, mk)))
    for blocks in set_partitions(inst.n):
        if len(blocks) > 1:
            offer(partition_constraint(inst, partition_from_masks(inst, blocks)))
    return sorted(best.values(), key=lambda c: (c.kind, sorted(c.edges), c.rhs))


def seed_constraints(inst: Instance) -> list[Constraint]:
    cons = []
    full = inst.full_mask
    for i in range(inst.n):
        side = 1 << i
        if (inst.t_mask >> i) & 1:
            cons.append(partition_constraint(inst, partition_from_masks(inst, [side, full ^ side])))
        else:
            cons.append(even_cut_constraint(inst, cut_from_mask(inst, side)))
    if inst.n > 2:
        cons.append(partition_constraint(inst, partition_from_masks(inst, [1 << i for i in range(inst.n)])))
    return cons


def _solve_restricted(inst: Instance, cons: list[Constraint]) -> tuple[EdgeVector, Fraction]:
    # dual: max sum rhs_k y_k  s.t.  sum_{k: e in C_k} y_k <= c_e,  y >= 0
    rows = [[1 if e in con.edges else 0 for con in cons] for e in range(inst.m)]
    res = maximize([con.rhs for con in cons], rows, inst.costs)
    x = res.dual
    value = sum((c * v for c, v in zip(inst.costs, x)), Fraction(0))
    if value != res.value:
        raise ArithmeticError("strong duality violated in restricted LP")
    return x, value


def _active(inst: Instance, x: EdgeVector, cons: list[Constraint]) -> list[Constraint]:
    return [con for con in cons if weigh(x, con.edges) == con.rhs]


def solve_lp(inst: Instance, method: str = "rowgen", cut_batch: int = 8) -> LpSolution:
    """Optimal x* of the T-tour LP in exact arithmetic.

    ``method="rowgen"`` starts from degree and singleton-partition rows and
    adds violated constraints found by the exhaustive separators until
    neither finds one. ``method="enumerate"`` builds every constraint up
    front (n <= ENUMERATION_LIMIT).
    """
    if inst.n == 1:
        return LpSolution([Fraction(0)] * inst.m, Fraction(0), [], 0, method)
    if method == "enumerate":
        if inst.n > ENUMERATION_LIMIT:
            raise InstanceError(f"full enumeration limited to n <= {ENUMERATION_LIMIT}")
        cons = all_constraints(inst)
        x, value = _solve_restricted(inst, cons)
        if separate_even_cut(inst, x) or separate_partition(inst, x):
            raise ArithmeticError("enumerated LP solution violates a constraint")
        return LpSolution(x, value, _active(inst, x, cons), 1, method)
    if method != "rowgen":
        raise ValueError(f"unknown method {method!r}")

    cons = seed_constraints(inst)
    known = {(con.edges, con.rhs) for con in cons}
    rounds = 0
    while True:
        rounds += 1
        x, value = _solve_restricted(inst, cons)
        added = 0
        for cut in violated_even_cuts(inst, x, limit=cut_batch):
            con = even_cut_constraint(inst, cut)
            if (con.edges, con.rhs) not in known:
                known.add((con.edges, con.rhs))
                cons.append(con)
                added += 1
        part = separate_partition(inst, x)
        if part is not None:
            con = partition_constraint(inst, part)
            if (con.edges, con.rhs) not in known:
                known.add((con.edges, con.rhs))
                cons.append(con)
                added += 1
        if not added:
            if separate_even_cut(inst, x) or part is not None:
                raise ArithmeticError("separation returned a constraint already in the model")
            return LpSolution(x, value, _active(inst, x, cons), rounds, method)


def is_lp_feasible(inst: Instance, x: EdgeVector) -> bool:
    return (all(v >= 0 for v in x) and separate_even_cut(inst, x) is None
            and separate_partition(inst, x) is None)


__all__ = [
    "Constraint",
    "LpSolution",
    "all_constraints",
    "is_lp_feasible",
    "min_partition_slack",
    "separate_even_cut",
    "separate_partition",
    "set_partitions",
    "solve_lp",
    "violated_even_cuts",
]
