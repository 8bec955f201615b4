"""Compiled kernels against their pure-Python twins on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one row per kernel with the median time for each backend and the
speedup. Outputs of both backends are compared on every input.
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import timeit

from ttour import _pykernels

try:
    from ttour import _ckernels
except ImportError:
    _ckernels = None


def random_graph(rng: random.Random, n: int, m: int):
    us, vs = [], []
    for _ in range(m):
        a, b = rng.sample(range(n), 2)
        us.append(a)
        vs.append(b)
    return us, vs, [rng.randint(0, 100) for _ in range(m)]


def cases(rng: random.Random):
    n = 16
    us, vs, w = random_graph(rng, n, 40)
    yield "subset_loads n=16 m=40", "subset_loads", (n, us, vs, w)
    n = 11
    us, vs, w = random_graph(rng, n, 20)
    loads = _pykernels.subset_loads(n, us, vs, w)
    yield "min_partition n=11", "min_partition", (n, loads, -50)
    n = 8
    us, vs, w = random_graph(rng, n, 16)
    yield "join_bruteforce m=16", "join_bruteforce", (n, us, vs, w, 0b00110011)
    n = 7
    us, vs, w = random_graph(rng, n, 14)
    yield "tour_bruteforce m=14", "tour_bruteforce", (n, us, vs, w, 0b0000011)
    k = 14
    dist = [0 if i == j else rng.randint(1, 100) for i in range(k) for j in range(k)]
    dist = [min(dist[i * k + j], dist[j * k + i]) for i in range(k) for j in range(k)]
    yield "matching_dp k=14", "matching_dp", (k, dist)


def timed(func, args, repeat: int) -> float:
    return statistics.median(timeit.repeat(lambda: func(*args), number=1, repeat=repeat))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the Python backend is available", file=sys.stderr)
        return 1
    print(f"{'kernel':26s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for label, name, inputs in cases(random.Random(args.seed)):
        py, cy = getattr(_pykernels, name), getattr(_ckernels, name)
        if py(*inputs) != cy(*inputs):
            print(f"{label}: backends disagree", file=sys.stderr)
            return 2
        tp, tc = timed(py, inputs, args.repeat), timed(cy, inputs, args.repeat)
        print(f"{label:26s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
