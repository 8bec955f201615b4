"""Exact rational primal simplex with Bland's rule.

Solves ``max c.y  s.t.  A y <= b, y >= 0`` with ``b >= 0``, so the slack
basis is feasible and no phase one is needed. Both callers in this package
have that form: the T-tour LP is solved through its dual (costs are the
right-hand side) and the tree-packing master problem has capacities x*.

Arithmetic is exact. gmpy2's ``mpq`` is used internally when available
(same values as ``fractions.Fraction``, much faster); results are returned
as ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction


class Unbounded(ArithmeticError):
    pass


@dataclass
class SimplexResult:
    value: Fraction
    primal: list[Fraction]  # y, one entry per column of A
    dual: list[Fraction]  # shadow price per row of A (>= 0)
    basis: list[int]
    pivots: int


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def maximize(c: list, rows: list[list], b: list, max_pivots: int = 1_000_000) -> SimplexResult:
    """Maximise ``c.y`` over ``rows @ y <= b``, ``y >= 0``.

    ``rows`` is a dense m-by-n matrix. Entering variable: lowest index with
    positive reduced cost. Leaving variable: minimum ratio, ties broken
    toward the lowest basic variable index. Raises ``Unbounded``.
    """
    m, n = len(rows), len(c)
    if any(Fraction(v) < 0 for v in b):
        raise ValueError("right-hand side must be nonnegative")
    zero, one = _Q(0), _Q(1)
    width = n + m
    tab = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError("ragged constraint matrix")
        r = [_Q(v) for v in row] + [zero] * m
        r[n + i] = one
        tab.append(r)
    rhs = [_Q(v) for v in b]
    red = [_Q(v) for v in c] + [zero] * m  # reduced costs of the max problem
    obj = zero
    basis = list(range(n, n + m))

    pivots = 0
    while True:
        enter = next((j for j in range(width) if red[j] > 0), -1)
        if enter < 0:
            break
        leave, best = -1, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave < 0:
            raise Unbounded("objective unbounded above")
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot limit exceeded")

        prow = tab[leave]
        piv = prow[enter]
        if piv != 1:
            prow = [v / piv for v in prow]
            tab[leave] = prow
            rhs[leave] /= piv
        nz = [j for j in range(width) if prow[j] != 0]
        for i in range(m):
            if i == leave:
                continue
            f = tab[i][enter]
            if f != 0:
                row = tab[i]
                for j in nz:
                    row[j] -= f * prow[j]
                rhs[i] -= f * rhs[leave]
        f = red[enter]
        for j in nz:
            red[j] -= f * prow[j]
        obj += f * rhs[leave]
        basis[leave] = enter

    primal = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            primal[var] = _frac(rhs[i])
    dual = [_frac(-red[n + i]) for i in range(m)]
    return SimplexResult(_frac(obj), primal, dual, basis, pivots)
