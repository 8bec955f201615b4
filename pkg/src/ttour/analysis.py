"""Executable certificates for every inequality behind the 11/7 bound.

All quantities are rebuilt here from their definitions (lonely sets,
modified costs, parity correction vectors) rather than taken from the
algorithm internals, then compared exactly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .algorithms import GUARANTEE, Pipeline
from .graph import EdgeVector, Instance, dot, is_connected, odd_mask, subset_loads, weigh
from .lp import separate_even_cut, separate_partition
from .tjoin import join_polyhedron_violation

LAMBDAS = (Fraction(2, 21), Fraction(2, 3), Fraction(5, 21))
ALPHA = Fraction(1, 14)
ALPHA_ALT = Fraction(1, 8)
HALL_SUBSET_LIMIT = 12


class CertificateError(AssertionError):
    """An inequality that the analysis guarantees failed on an instance."""


@dataclass
class Check:
    name: str
    holds: bool
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    detail: str = ""


@dataclass
class BoundReport:
    basic: Fraction
    refined: Fraction
    refined_alt: Fraction
    deletion: Fraction
    combination: Fraction
    guarantee_bound: Fraction
    bomc_cost: Fraction
    delete_cost: Fraction
    lambdas: tuple[Fraction, Fraction, Fraction] = LAMBDAS
    alpha: Fraction = ALPHA


@dataclass
class HallWitness:
    flow: dict[tuple[int, int], Fraction]  # (edge index, narrow-cut index) -> amount
    value: Fraction
    subsets_checked: int


@dataclass
class Certificate:
    checks: list[Check] = field(default_factory=list)
    bounds: BoundReport | None = None
    ratios: dict[str, Fraction | None] = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.holds]

    def add(self, name: str, lhs, rhs, relation: str = "<=", detail: str = "") -> Check:
        holds = {"<=": lhs <= rhs, "==": lhs == rhs, ">=": lhs >= rhs}[relation]
        check = Check(name, bool(holds), lhs, rhs, detail)
        self.checks.append(check)
        return check

    def flag(self, name: str, holds: bool, detail: str = "") -> Check:
        check = Check(name, bool(holds), detail=detail)
        self.checks.append(check)
        return check


# -- definitions rebuilt from scratch -------------------------------------

def _lonely(pipe: Pipeline, S) -> dict[int, int]:
    """narrow-cut index -> the single tree edge of S in that cut."""
    out = {}
    for i, nc in enumerate(pipe.family):
        hit = S & nc.cut.edges
        if len(hit) == 1:
            out[i] = next(iter(hit))
    return out


def _modified_cost(pipe: Pipeline, lonely_at: dict[int, int]) -> list[Fraction]:
    inst = pipe.inst
    cS = []
    for k in range(inst.m):
        vals = [inst.costs[e] for i, e in lonely_at.items() if k in pipe.family[i].cut.edges]
        cS.append(inst.costs[k] + 2 * (sum(vals, Fraction(0)) - max(vals, default=Fraction(0))))
    return cS


def build_y(pipe: Pipeline, alpha: Fraction = ALPHA, check: bool = True) -> list[EdgeVector]:
    """Parity correction vectors y^S for Best-of-Many-Christofides.

    y^S = x*/2 + alpha chi^(I_S) + sum over narrow non-lonely C of
    max(1 - x*(C)/2 - alpha, 0) v^C. With ``check`` each y^S must lie in
    the (odd(S) xor T)-join polyhedron.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    inst, x = pipe.inst, pipe.x_star
    ys = []
    for S, st in zip(pipe.comb.trees, pipe.structures):
        lonely_at = _lonely(pipe, S)
        y = [v / 2 for v in x]
        for k in st.I:
            y[k] += alpha
        for i, nc in enumerate(pipe.family):
            if i in lonely_at:
                continue
            coef = max(1 - nc.load / 2 - alpha, Fraction(0))
            if coef:
                for k, v in enumerate(pipe.vC[i]):
                    y[k] += coef * v
        if check:
            bad = join_polyhedron_violation(inst, y, odd_mask(inst, S) ^ inst.t_mask)
            if bad is not None:
                raise CertificateError(f"y^S violates the join polyhedron at {sorted(bad.side)}")
        ys.append(y)
    return ys


def build_ybar(pipe: Pipeline, check: bool = True) -> list[EdgeVector]:
    """Parity correction vectors for the forests F_S = S - L_S:

    2/5 x* + 1/5 chi^S + 1/5 chi^(I_S - L_S) + sum over lonely C of
    2/5 (2 - x*(C)) chi^(S & C).
    """
    inst, x = pipe.inst, pipe.x_star
    ys = []
    for S, st in zip(pipe.comb.trees, pipe.structures):
        lonely_at = _lonely(pipe, S)
        L = set(lonely_at.values())
        y = [Fraction(2, 5) * v for v in x]
        for k in S:
            y[k] += Fraction(1, 5)
        for k in st.I - L:
            y[k] += Fraction(1, 5)
        for i, k in lonely_at.items():
            y[k] += Fraction(2, 5) * (2 - pipe.family[i].load)
        if check:
            F = S - L
            bad = join_polyhedron_violation(inst, y, odd_mask(inst, F) ^ inst.t_mask)
            if bad is not None:
                raise CertificateError(f"ybar^S violates the join polyhedron at {sorted(bad.side)}")
        ys.append(y)
    return ys


def verify_reconnection_bound(pipe: Pipeline, tree: int) -> tuple[Fraction, Fraction, bool]:
    """c^S(x*) - c(x*) against 2 sum over lonely C of (x*(C) - 1) c(S & C)."""
    inst, x = pipe.inst, pipe.x_star
    lonely_at = _lonely(pipe, pipe.comb.trees[tree])
    cS = _modified_cost(pipe, lonely_at)
    lhs = dot(cS, x) - dot(inst.costs, x)
    rhs = 2 * sum(((pipe.family[i].load - 1) * inst.costs[e] for i, e in lonely_at.items()),
                  Fraction(0))
    return lhs, rhs, lhs <= rhs


def _max_flow(n: int, cap: dict[tuple[int, int], Fraction], s: int, t: int) -> dict[tuple[int, int], Fraction]:
    """Edmonds-Karp on an exact-capacity digraph; returns the flow per arc."""
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    residual: dict[tuple[int, int], Fraction] = {}
    for (a, b), c in cap.items():
        residual[(a, b)] = residual.get((a, b), Fraction(0)) + c
        residual.setdefault((b, a), Fraction(0))
        adj[a].append(b)
        adj[b].append(a)
    while True:
        prev = {s: s}
        queue = deque([s])
        while queue and t not in prev:
            a = queue.popleft()
            for b in adj[a]:
                if b not in prev and residual[(a, b)] > 0:
                    prev[b] = a
                    queue.append(b)
        if t not in prev:
            break
        path = []
        b = t
        while b != s:
            path.append((prev[b], b))
            b = prev[b]
        push = min(residual[arc] for arc in path)
        for a, b in path:
            residual[(a, b)] -= push
            residual[(b, a)] += push
    return {arc: c - residual[arc] for arc, c in cap.items()}


def verify_hall(pipe: Pipeline, tree: int) -> HallWitness:
    """Fractional assignment f(e, C) <= x*_e per edge with f(., C) >= 1 per lonely cut.

    Found by an exact max flow; the Hall inequality x*(union of L') >= |L'|
    is also checked for every subfamily L' of lonely cuts when there are at
    most HALL_SUBSET_LIMIT of them.
    """
    inst, x = pipe.inst, pipe.x_star
    lonely = sorted(_lonely(pipe, pipe.comb.trees[tree]))
    m, L = inst.m, len(lonely)
    source, sink = 0, 1 + m + L
    cap: dict[tuple[int, int], Fraction] = {}
    for k in range(m):
        if x[k] > 0:
            cap[(source, 1 + k)] = x[k]
    for j, i in enumerate(lonely):
        cap[(1 + m + j, sink)] = Fraction(1)
        for k in pipe.family[i].cut.edges:
            if x[k] > 0:
                cap[(1 + k, 1 + m + j)] = x[k]
    flow = _max_flow(sink + 1, cap, source, sink) if L else {}
    value = sum((flow[(1 + m + j, sink)] for j in range(L)), Fraction(0))
    assignment = {(a - 1, lonely[b - 1 - m]): f for (a, b), f in flow.items()
                  if 1 <= a <= m and b > m and f}
    if value < L:
        raise CertificateError(f"Hall flow for tree {tree} has value {value} < {L}")
    for k in range(m):
        if sum((f for (e, _), f in assignment.items() if e == k), Fraction(0)) > x[k]:
            raise CertificateError("Hall flow exceeds x* on an edge")
    checked = 0
    if L <= HALL_SUBSET_LIMIT:
        for r in range(1, L + 1):
            for sub in combinations(lonely, r):
                union = frozenset().union(*(pipe.family[i].cut.edges for i in sub))
                checked += 1
                if weigh(x, union) < r:
                    raise CertificateError(f"Hall condition fails for tree {tree}")
    return HallWitness(assignment, value, checked)


def basic_bound(pipe: Pipeline) -> Fraction:
    c = pipe.inst.costs
    return dot(c, pipe.x_star) + dot(c, pipe.aggregates.J_p)


def refined_bound(pipe: Pipeline, alpha: Fraction = ALPHA) -> Fraction:
    c = pipe.inst.costs
    total = Fraction(3, 2) * dot(c, pipe.x_star) + alpha * dot(c, pipe.aggregates.I_p)
    for nc, v in zip(pipe.family, pipe.vC):
        total += (nc.load - 1) * max(1 - nc.load / 2 - alpha, Fraction(0)) * dot(c, v)
    return total


def deletion_bound(pipe: Pipeline) -> Fraction:
    c = pipe.inst.costs
    agg = pipe.aggregates
    total = (Fraction(8, 5) * dot(c, pipe.x_star) + Fraction(1, 5) * dot(c, agg.I_p)
             - Fraction(2, 5) * dot(c, agg.L_p))
    for nc, v in zip(pipe.family, pipe.vC):
        total -= Fraction(2, 5) * (2 - nc.load) ** 2 * dot(c, v)
    return total


def evaluate_bounds(pipe: Pipeline) -> BoundReport:
    b31, b43, b51 = basic_bound(pipe), refined_bound(pipe), deletion_bound(pipe)
    l1, l2, l3 = LAMBDAS
    return BoundReport(
        basic=b31,
        refined=b43,
        refined_alt=refined_bound(pipe, ALPHA_ALT),
        deletion=b51,
        combination=l1 * b31 + l2 * b43 + l3 * b51,
        guarantee_bound=GUARANTEE * pipe.lp.value,
        bomc_cost=pipe.bomc.cost,
        delete_cost=pipe.delete.cost,
    )


def g(x: Fraction) -> Fraction:
    """(x-1)/(2-x) * max(13 - 7x, 0) + 2x - 4 on [1, 2)."""
    return (x - 1) / (2 - x) * max(13 - 7 * x, Fraction(0)) + 2 * x - 4


@dataclass(frozen=True)
class MaxCheck:
    argmax: Fraction
    value: Fraction
    grid_max: Fraction
    grid_argmax: Fraction
    holds: bool


def max_function_check(step: Fraction = Fraction(1, 1000)) -> MaxCheck:
    """g(5/3) exactly, and g <= 2 on the rational grid 1, 1+step, ... < 2."""
    peak = Fraction(5, 3)
    grid = []
    x = Fraction(1)
    while x < 2:
        grid.append((g(x), x))
        x += step
    gmax, gx = max(grid)
    return MaxCheck(peak, g(peak), gmax, gx, g(peak) == 2 and gmax <= 2)


def verify(pipe: Pipeline) -> Certificate:
    """Recheck every inequality and identity on one pipeline run."""
    inst, x, comb = pipe.inst, pipe.x_star, pipe.comb
    c = inst.costs
    cert = Certificate()
    cx = dot(c, x)

    cert.add("lp_value", cx, pipe.lp.value, "==")
    cert.flag("lp_even_cuts", separate_even_cut(inst, x) is None)
    cert.flag("lp_partitions", separate_partition(inst, x) is None)
    cert.add("tree_weights_sum", sum(comb.weights, Fraction(0)), Fraction(1), "==")
    tv = comb.tree_vector(inst.m)
    cert.flag("domination", all(a <= b for a, b in zip(tv, x)))
    agg = pipe.aggregates
    cert.add("I_p_plus_J_p", dot(c, agg.I_p) + dot(c, agg.J_p), cx)

    loads, denom = subset_loads(inst, x)
    narrow_masks = {mk for mk in range(2, 1 << inst.n, 2) if loads[mk] < 2 * denom}
    cert.add("narrow_family", len(pipe.family), len(narrow_masks), "==")

    ys = build_y(pipe, ALPHA, check=False)
    ybars = build_ybar(pipe, check=False)
    lonely_mass = [Fraction(0)] * len(pipe.family)
    L_p = [Fraction(0)] * inst.m
    for t, (S, p) in enumerate(comb):
        st = pipe.structures[t]
        lonely_at = _lonely(pipe, S)
        L = frozenset(lonely_at.values())
        F = S - L
        for i in lonely_at:
            lonely_mass[i] += p
        for k in L:
            L_p[k] += p
        tag = f"tree[{t}]"
        cert.flag(f"{tag}.I_S_is_T_join", odd_mask(inst, st.I) == inst.t_mask)
        cert.flag(f"{tag}.J_S_parity", odd_mask(inst, st.J) == inst.t_mask ^ odd_mask(inst, S))
        cert.flag(f"{tag}.L_S_subset_I_S", L <= st.I)
        cert.flag(f"{tag}.lonely_edge_unique",
                  len(L) == len(lonely_at) == len(pipe.lonely[t].cuts)
                  and L == pipe.lonely[t].edges)
        cert.flag(f"{tag}.no_double_lonely", not any(
            len(S & nc.cut.edges) == 2 and (S & nc.cut.edges) <= L for nc in pipe.family))

        T_bomc = odd_mask(inst, S) ^ inst.t_mask
        bad = join_polyhedron_violation(inst, ys[t], T_bomc)
        cert.flag(f"{tag}.y_membership", bad is None,
                  "" if bad is None else f"violated at {sorted(bad.side)}")
        cand1 = pipe.bomc.candidates[t]
        cert.add(f"{tag}.join_le_y", cand1.join.cost, dot(c, ys[t]))

        T_del = odd_mask(inst, F) ^ inst.t_mask
        bad = join_polyhedron_violation(inst, ybars[t], T_del)
        cert.flag(f"{tag}.ybar_membership", bad is None,
                  "" if bad is None else f"violated at {sorted(bad.side)}")
        cS = _modified_cost(pipe, lonely_at)
        cand2 = pipe.delete.candidates[t]
        cert.flag(f"{tag}.modified_cost_matches", cS == cand2.modified_cost)
        cert.add(f"{tag}.reconnection_join", inst.cost(cand2.join.edges) + 2 * inst.cost(cand2.reconnect),
                 weigh(cS, cand2.join.edges))
        cert.add(f"{tag}.modified_join_le_ybar", weigh(cS, cand2.join.edges), dot(cS, ybars[t]))
        cert.flag(f"{tag}.reconnected", is_connected(inst, F | cand2.join.edges | cand2.reconnect))

        lhs, rhs, _ = verify_reconnection_bound(pipe, t)
        cert.add(f"{tag}.modified_lp_cost", lhs, rhs)
        try:
            hall = verify_hall(pipe, t)
            cert.add(f"{tag}.hall_flow", hall.value, Fraction(len(lonely_at)), ">=")
        except CertificateError as exc:
            cert.flag(f"{tag}.hall_flow", False, str(exc))
        gap = dot(cS, ybars[t]) - dot(c, ybars[t])
        cert.add(f"{tag}.reconnection_cost", gap, sum(
            (Fraction(4, 5) * (pipe.family[i].load - 1) * c[e] for i, e in lonely_at.items()),
            Fraction(0)))
        per_tree = (Fraction(2, 5) * cx + Fraction(6, 5) * inst.cost(S) + Fraction(1, 5) * inst.cost(st.I)
                    - Fraction(2, 5) * inst.cost(L)
                    - Fraction(2, 5) * sum(((2 - pipe.family[i].load) * c[e] for i, e in lonely_at.items()),
                                           Fraction(0)))
        cert.add(f"{tag}.deletion_per_tree", inst.cost(F) + dot(cS, ybars[t]), per_tree)

    identity = [Fraction(0)] * inst.m
    for nc, v, mass in zip(pipe.family, pipe.vC, lonely_mass):
        side = sorted(nc.cut.side)
        cert.add(f"cut{side}.lonely_mass_lower", nc.load, 2 - mass, ">=")
        cert.add(f"cut{side}.nonlonely_mass_upper", 1 - mass, nc.load - 1)
        cert.add(f"cut{side}.vC_load", weigh(v, nc.cut.edges), Fraction(1), ">=")
        for k in range(inst.m):
            identity[k] += (2 - nc.load) * v[k]
    cert.flag("L_p_identity", identity == L_p == agg.L_p)
    cert.flag("L_p_le_I_p", all(a <= b for a, b in zip(agg.L_p, agg.I_p)))

    bounds = evaluate_bounds(pipe)
    cert.bounds = bounds
    cert.add("bomc_le_basic", bounds.bomc_cost, bounds.basic)
    cert.add("bomc_le_refined", bounds.bomc_cost, bounds.refined)
    cert.add("bomc_le_refined_alpha_1_8", bounds.bomc_cost, bounds.refined_alt)
    cert.add("delete_le_deletion", bounds.delete_cost, bounds.deletion)
    best = min(bounds.bomc_cost, bounds.delete_cost)
    cert.add("best_le_combination", best, bounds.combination)
    cert.add("combination_le_guarantee", bounds.combination, bounds.guarantee_bound)
    cert.add("guarantee", pipe.best.cost, bounds.guarantee_bound)

    cert.ratios = {
        "tour_to_lp": None if pipe.lp.value == 0 else pipe.best.cost / pipe.lp.value,
        "L_p_to_x": None if cx == 0 else dot(c, agg.L_p) / cx,
        "I_p_to_x": None if cx == 0 else dot(c, agg.I_p) / cx,
    }
    return cert


def assert_certificate(cert: Certificate) -> None:
    failures = cert.failures()
    if failures:
        names = ", ".join(f.name for f in failures[:5])
        raise CertificateError(f"{len(failures)} certificate checks failed: {names}")
