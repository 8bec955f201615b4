"""JSON views of pipeline objects. Rationals are serialised as "p/q" strings."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .algorithms import Pipeline, Tour, guarantee_holds, ratio
from .analysis import Certificate, MaxCheck
from .graph import EdgeVector, Instance, format_rational
from .lp import LpSolution


def q(value) -> str | None:
    return None if value is None else format_rational(value)


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def digest(inst: Instance) -> str:
    blob = json.dumps(inst.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def vector(inst: Instance, vec: EdgeVector, skip_zero: bool = False) -> dict[str, str]:
    return {e.id: q(vec[k]) for k, e in enumerate(inst.edges) if not (skip_zero and vec[k] == 0)}


def lp_json(inst: Instance, lp: LpSolution) -> dict:
    return {"value": q(lp.value), "x": vector(inst, lp.x_star)}


def decomposition_json(pipe: Pipeline) -> dict:
    inst = pipe.inst
    trees = []
    for (S, p), st, info in zip(pipe.comb, pipe.structures, pipe.lonely):
        trees.append({"edges": inst.ids(S), "weight": q(p), "I": inst.ids(st.I),
                      "J": inst.ids(st.J), "lonely": inst.ids(info.edges)})
    agg = pipe.aggregates
    return {
        "trees": trees,
        "I_p": vector(inst, agg.I_p),
        "J_p": vector(inst, agg.J_p),
        "L_p": vector(inst, agg.L_p),
        "strict_domination_edges": inst.ids(agg.slack_edges),
    }


def cuts_json(pipe: Pipeline) -> dict:
    inst = pipe.inst
    narrow = [{"side": sorted(nc.cut.side), "edges": inst.ids(nc.cut.edges), "load": q(nc.load)}
              for nc in pipe.family]
    trees = []
    for S, info in zip(pipe.comb.trees, pipe.lonely):
        trees.append({
            "edges": inst.ids(S),
            "lonely_cuts": [sorted(pipe.family[i].cut.side) for i in info.cuts],
            "lonely_edges": inst.ids(info.edges),
        })
    vC = [{"side": sorted(nc.cut.side), "v": vector(inst, v, skip_zero=True)}
          for nc, v in zip(pipe.family, pipe.vC)]
    return {"narrow": narrow, "trees": trees, "v": vC}


def tour_json(pipe: Pipeline, tour: Tour) -> dict:
    lp_value = pipe.lp.value
    return {
        "algorithm": tour.algorithm,
        "cost": q(tour.cost),
        "edges": tour.edge_ids(pipe.inst),
        "lp_value": q(lp_value),
        "ratio": q(ratio(tour.cost, lp_value)),
        "guarantee_holds": guarantee_holds(tour.cost, lp_value),
    }


def certificate_json(cert: Certificate, max_check: MaxCheck | None = None) -> dict:
    out = {
        "all_hold": cert.all_hold,
        "checks": [{"name": c.name, "holds": c.holds, "lhs": q(c.lhs), "rhs": q(c.rhs),
                    **({"detail": c.detail} if c.detail else {})} for c in cert.checks],
        "ratios": {k: q(v) for k, v in cert.ratios.items()},
    }
    if cert.bounds is not None:
        b = cert.bounds
        out["bounds"] = {
            "basic": q(b.basic), "refined": q(b.refined),
            "refined_alpha_1_8": q(b.refined_alt), "deletion": q(b.deletion),
            "combination": q(b.combination), "guarantee_bound": q(b.guarantee_bound),
            "bomc_cost": q(b.bomc_cost), "delete_cost": q(b.delete_cost),
            "lambdas": [q(v) for v in b.lambdas], "alpha": q(b.alpha),
        }
    if max_check is not None:
        out["max_function"] = {"argmax": q(max_check.argmax), "value": q(max_check.value),
                               "grid_max": q(max_check.grid_max),
                               "grid_argmax": q(max_check.grid_argmax), "holds": max_check.holds}
        out["all_hold"] = out["all_hold"] and max_check.holds
    return out


def instance_report(pipe: Pipeline, cert: Certificate, oracle_cost: Fraction | None = None) -> dict:
    best = pipe.best
    report = {
        "instance": digest(pipe.inst),
        "n": pipe.inst.n,
        "m": pipe.inst.m,
        "T": len(pipe.inst.terminals),
        "lp_value": q(pipe.lp.value),
        "costs": {"bomc": q(pipe.bomc.cost), "delete": q(pipe.delete.cost), "combined": q(best.cost)},
        "ratio": q(ratio(best.cost, pipe.lp.value)),
        "guarantee_holds": guarantee_holds(best.cost, pipe.lp.value),
        "all_hold": cert.all_hold,
        "violations": [c.name for c in cert.failures()],
    }
    if oracle_cost is not None:
        report["oracle"] = {"opt_tour_cost": q(oracle_cost),
                            "sandwich_holds": pipe.lp.value <= oracle_cost <= best.cost}
    return report
