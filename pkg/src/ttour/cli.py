"""Command-line entry point: ``ttour <subcommand> ...``.

JSON goes to stdout, a one-line human summary to stderr. Exit codes:
0 success, 2 invalid input, 3 guarantee or certificate violation,
4 oracle size limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction
from multiprocessing import Pool
from pathlib import Path

from . import report
from .algorithms import GUARANTEE, TourError, run_pipeline
from .analysis import CertificateError, max_function_check, verify
from .graph import Instance, InstanceError, parse_rational
from .lp import solve_lp
from .oracle import TOUR_EDGE_LIMIT, OracleTooLarge, generate, oracle
from .tjoin import min_join

log = logging.getLogger("ttour")

EXIT_OK, EXIT_INVALID, EXIT_VIOLATION, EXIT_ORACLE = 0, 2, 3, 4


class Violation(Exception):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload


def _emit(payload: dict, summary: str) -> None:
    print(report.dumps(payload))
    print(summary, file=sys.stderr)


def _seed(args_seed: int) -> int:
    env = os.environ.get("TTOUR_SEED")
    return int(env) if env not in (None, "") else args_seed


def cmd_lp(args) -> int:
    inst = Instance.load(args.instance)
    lp = solve_lp(inst, method=args.method)
    _emit(report.lp_json(inst, lp), f"LP value {report.q(lp.value)} ({lp.rounds} rounds)")
    return EXIT_OK


def cmd_decompose(args) -> int:
    pipe = run_pipeline(Instance.load(args.instance))
    _emit(report.decomposition_json(pipe), f"{len(pipe.comb)} trees")
    return EXIT_OK


def cmd_cuts(args) -> int:
    pipe = run_pipeline(Instance.load(args.instance))
    _emit(report.cuts_json(pipe), f"{len(pipe.family)} narrow cuts")
    return EXIT_OK


def cmd_tjoin(args) -> int:
    inst = Instance.load(args.instance)
    targets = [t for t in args.targets.split(",") if t] if args.targets else []
    costs = None
    if args.costs:
        raw = json.loads(Path(args.costs).read_text())
        if not isinstance(raw, dict):
            raise InstanceError("costs: expected an object mapping edge id to cost")
        costs = list(inst.costs)
        for eid, val in raw.items():
            costs[inst.eidx(eid)] = parse_rational(val, f"costs[{eid}]")
        if any(c < 0 for c in costs):
            raise InstanceError("costs: must be nonnegative")
    if len(targets) % 2:
        raise InstanceError("targets: must have even cardinality")
    res = min_join(inst, targets, costs)
    _emit({"cost": report.q(res.cost), "edges": inst.ids(res.edges)},
          f"join cost {report.q(res.cost)}")
    return EXIT_OK


def cmd_solve(args) -> int:
    pipe = run_pipeline(Instance.load(args.instance))
    tour = pipe.tour(args.algorithm)
    payload = report.tour_json(pipe, tour)
    _emit(payload, f"{args.algorithm}: cost {payload['cost']}, ratio {payload['ratio']}")
    if not payload["guarantee_holds"]:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args) -> int:
    pipe = run_pipeline(Instance.load(args.instance))
    cert = verify(pipe)
    payload = report.certificate_json(cert, max_function_check())
    _emit(payload, f"{len(cert.checks)} checks, all_hold={payload['all_hold']}")
    return EXIT_OK if payload["all_hold"] else EXIT_VIOLATION


def cmd_oracle(args) -> int:
    inst = Instance.load(args.instance)
    res = oracle(inst)
    payload = {"opt_tour_cost": report.q(res.opt_tour_cost),
               "opt_tour": {inst.edges[k].id: m for k, m in sorted(res.opt_tour.items())},
               "lp_value": report.q(res.lp_value)}
    _emit(payload, f"OPT {payload['opt_tour_cost']}, LP {payload['lp_value']}")
    return EXIT_OK


def cmd_gen(args) -> int:
    inst = generate(_seed(args.seed), args.n, args.density, args.t_size, args.max_cost)
    text = report.dumps(inst.to_dict())
    if args.output:
        Path(args.output).write_text(text + "\n")
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        print(text)
    return EXIT_OK


# -- batch ----------------------------------------------------------------

def run_one(inst: Instance, with_oracle: bool = True, timing: bool = False) -> dict:
    """solve + verify (+ oracle when small enough) for one instance."""
    start = time.perf_counter()
    try:
        pipe = run_pipeline(inst)
        cert = verify(pipe)
    except (TourError, CertificateError, ArithmeticError) as exc:
        raise Violation(str(exc), inst.to_dict()) from exc
    opt = None
    if with_oracle and inst.m <= TOUR_EDGE_LIMIT:
        opt = oracle(inst, with_lp=False).opt_tour_cost
    rep = report.instance_report(pipe, cert, opt)
    if timing:
        rep["seconds"] = round(time.perf_counter() - start, 4)
    if not rep["all_hold"] or not rep["guarantee_holds"] or (opt is not None and not rep["oracle"]["sandwich_holds"]):
        raise Violation(f"violations on instance {rep['instance']}: {rep['violations']}", inst.to_dict())
    return rep


def _run_payload(job):
    data, with_oracle, timing = job
    try:
        return run_one(Instance.from_dict(data), with_oracle, timing), None
    except Violation as exc:
        return None, (str(exc), exc.payload)


def generated_instances(count: int, seed: int, n_min: int, n_max: int, max_cost: int,
                        density_max: float = 0.6) -> list[Instance]:
    """Seeded instances; the terminal-set stratum cycles with the index (T empty, |T| = 2, random even)."""
    import random

    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randint(n_min, n_max)
        stratum = k % 3
        t_size = 0 if stratum == 0 else 2 if stratum == 1 else 2 * rng.randint(0, n // 2)
        out.append(generate(rng.randrange(1 << 30), n, rng.uniform(0, density_max), t_size, max_cost))
    return out


def aggregate(reports: list[dict]) -> dict:
    worst = None
    worst_oracle_gap = None
    for rep in reports:
        if rep["ratio"] is not None:
            r = Fraction(rep["ratio"])
            worst = r if worst is None or r > worst else worst
        if "oracle" in rep and Fraction(rep["oracle"]["opt_tour_cost"]) > 0:
            gap = Fraction(rep["costs"]["combined"]) / Fraction(rep["oracle"]["opt_tour_cost"])
            worst_oracle_gap = gap if worst_oracle_gap is None or gap > worst_oracle_gap else worst_oracle_gap
    return {
        "instances": len(reports),
        "worst_ratio": report.q(worst),
        "violations": sum(len(r["violations"]) for r in reports),
        "guarantee_failures": sum(not r["guarantee_holds"] for r in reports),
        "oracle_checked": sum("oracle" in r for r in reports),
        "worst_oracle_gap": report.q(worst_oracle_gap),
        "guarantee": report.q(GUARANTEE),
    }


def cmd_batch(args) -> int:
    if args.directory:
        paths = sorted(Path(args.directory).glob("*.json"))
        instances = [Instance.load(p) for p in paths]
        names = [p.name for p in paths]
    else:
        instances = generated_instances(args.count, _seed(args.seed), args.n_min, args.n_max, args.max_cost)
        names = [f"gen-{k}" for k in range(len(instances))]
    jobs = [(inst.to_dict(), not args.no_oracle, args.timing) for inst in instances]
    if args.jobs > 1 and len(jobs) > 1:
        with Pool(args.jobs) as pool:
            results = pool.map(_run_payload, jobs)
    else:
        results = [_run_payload(job) for job in jobs]
    reports = []
    for name, (rep, failure) in zip(names, results):
        if failure is not None:
            message, payload = failure
            dump = Path(args.failure_dir) / f"ttour-failure-{name}.json"
            dump.write_text(report.dumps(payload) + "\n")
            print(report.dumps({"failed": name, "error": message, "replay": str(dump)}))
            print(f"hard failure on {name}: {message}", file=sys.stderr)
            return EXIT_VIOLATION
        rep["name"] = name
        reports.append(rep)
    payload = {"aggregate": aggregate(reports)}
    if args.details:
        payload["instances"] = reports
    agg = payload["aggregate"]
    _emit(payload, f"{agg['instances']} instances, worst ratio {agg['worst_ratio']}, "
                   f"violations {agg['violations']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ttour", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lp", help="solve the LP relaxation")
    p.add_argument("instance")
    p.add_argument("--method", choices=["rowgen", "enumerate"], default="rowgen")
    p.set_defaults(func=cmd_lp)

    for name, func, text in [("decompose", cmd_decompose, "spanning-tree decomposition of x*"),
                             ("cuts", cmd_cuts, "narrow cuts and lonely classification"),
                             ("verify", cmd_verify, "certificate report for every bound and identity"),
                             ("oracle", cmd_oracle, "brute-force optimum and enumerated LP")]:
        p = sub.add_parser(name, help=text)
        p.add_argument("instance")
        p.set_defaults(func=func)

    p = sub.add_parser("tjoin", help="minimum-cost T'-join")
    p.add_argument("instance")
    p.add_argument("--targets", default="", help="comma-separated vertex ids")
    p.add_argument("--costs", help="JSON file mapping edge id to cost (overrides)")
    p.set_defaults(func=cmd_tjoin)

    p = sub.add_parser("solve", help="run the approximation algorithms")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=["bomc", "delete", "combined"], default="combined")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--t-size", type=int, default=2)
    p.add_argument("--max-cost", type=int, default=10)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("batch", help="solve and verify many instances")
    p.add_argument("directory", nargs="?", help="directory of instance JSON files")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--max-cost", type=int, default=10)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-oracle", action="store_true")
    p.add_argument("--details", action="store_true", help="include per-instance reports")
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds per instance")
    p.add_argument("--failure-dir", default=".")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InstanceError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OracleTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (TourError, CertificateError, ArithmeticError) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
