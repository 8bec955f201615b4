"""Brute-force ground truth and the seeded instance generator."""

from __future__ import annotations

import random
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .graph import Edge, Instance, InstanceError, scale
from .lp import solve_lp
from .tjoin import target_mask

TOUR_EDGE_LIMIT = 12
JOIN_EDGE_LIMIT = 20


class OracleTooLarge(ValueError):
    pass


@dataclass
class OracleResult:
    opt_tour_cost: Fraction
    opt_tour: Counter
    lp_value: Fraction | None = None
    opt_join_cost: dict[frozenset[str], Fraction] = field(default_factory=dict)


def opt_tour(inst: Instance, limit: int = TOUR_EDGE_LIMIT) -> OracleResult:
    """Cheapest T-tour by enumerating multiplicities {0, 1, 2} per edge.

    Capping multiplicity at 2 loses nothing: dropping two copies of an edge
    used three or more times keeps parity and connectivity and never costs
    more. Ties go to the lexicographically smallest multiplicity vector.
    """
    if inst.m > limit:
        raise OracleTooLarge(f"opt_tour enumerates 3^|E|; |E| = {inst.m} > {limit}")
    if inst.n == 1:
        return OracleResult(Fraction(0), Counter())
    ints, denom = scale(inst.costs)
    cost, mults = kernels.tour_bruteforce(inst.n, inst.us, inst.vs, ints, inst.t_mask)
    if mults is None:
        raise InstanceError("instance has no T-tour")
    tour = Counter({k: mult for k, mult in enumerate(mults) if mult})
    return OracleResult(Fraction(cost, denom), tour)


def opt_join_bruteforce(inst: Instance, targets: Iterable[str] | int,
                        costs: list[Fraction] | None = None,
                        limit: int = JOIN_EDGE_LIMIT) -> tuple[Fraction, frozenset[int]]:
    """Cheapest T'-join over all 2^|E| edge subsets."""
    if inst.m > limit:
        raise OracleTooLarge(f"join enumeration is 2^|E|; |E| = {inst.m} > {limit}")
    costs = inst.costs if costs is None else costs
    ints, denom = scale(costs)
    tmask = target_mask(inst, targets)
    cost, mask = kernels.join_bruteforce(inst.n, inst.us, inst.vs, ints, tmask)
    if cost < 0:
        raise InstanceError("no join exists for the given targets")
    return Fraction(cost, denom), frozenset(k for k in range(inst.m) if (mask >> k) & 1)


def oracle(inst: Instance, with_lp: bool = True) -> OracleResult:
    res = opt_tour(inst)
    if with_lp:
        res.lp_value = solve_lp(inst, method="enumerate").value
        if res.lp_value > res.opt_tour_cost:
            raise ArithmeticError("LP value exceeds the optimal tour cost")
    return res


def generate(seed: int, n: int, edge_density: float = 0.5, t_size: int = 2,
             max_cost: int = 10, min_cost: int = 0) -> Instance:
    """Connected random multigraph: a random tree plus extra random edges.

    ``edge_density`` is the fraction of the remaining simple pairs added as
    extra edges; extra edges are drawn independently, so parallel edges can
    occur. Deterministic per argument tuple.
    """
    if n < 2:
        raise InstanceError("n must be at least 2")
    if t_size % 2 or not 0 <= t_size <= n:
        raise InstanceError("t_size must be even and at most n")
    if not 0 <= edge_density <= 1:
        raise InstanceError("edge_density must lie in [0, 1]")
    if not 0 <= min_cost <= max_cost:
        raise InstanceError("need 0 <= min_cost <= max_cost")
    rng = random.Random(seed)
    width = len(str(n - 1))
    names = [f"v{i:0{width}d}" for i in range(n)]
    order = names[:]
    rng.shuffle(order)
    pairs = [(order[i], order[rng.randrange(i)]) for i in range(1, n)]
    extra = round(edge_density * (n * (n - 1) // 2 - (n - 1)))
    for _ in range(extra):
        a, b = rng.sample(names, 2)
        pairs.append((a, b))
    edges = [Edge(f"e{k}", a, b, Fraction(rng.randint(min_cost, max_cost)))
             for k, (a, b) in enumerate(pairs)]
    T = sorted(rng.sample(names, t_size))
    return Instance(names, edges, T)
