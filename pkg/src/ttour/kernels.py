"""Backend selection for the bitmask kernels.

The compiled ``_ckernels`` extension is used when it imports and the inputs
fit in 64-bit integers; otherwise the pure-Python twin runs. Setting
``TTOUR_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    if os.environ.get("TTOUR_PURE_PYTHON"):
        raise ImportError("pure Python forced")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"

_LIMIT = 1 << 62


def _native(bound: int):
    if _ckernels is not None and bound < _LIMIT:
        return _ckernels
    return _pykernels


def subset_loads(n: int, us: list[int], vs: list[int], w: list[int]) -> list[int]:
    return _native(sum(abs(x) for x in w)).subset_loads(n, us, vs, w)


def min_partition(n: int, loads: list[int], block_offset: int) -> tuple[int, list[int]]:
    bound = (max((abs(x) for x in loads), default=0) + abs(block_offset)) * (n + 1)
    return _native(bound).min_partition(n, loads, block_offset)


def join_bruteforce(n: int, us: list[int], vs: list[int], w: list[int],
                    target: int) -> tuple[int, int]:
    return _native(sum(w)).join_bruteforce(n, us, vs, w, target)


def tour_bruteforce(n: int, us: list[int], vs: list[int], w: list[int],
                    t_mask: int) -> tuple[int, list[int] | None]:
    # multiplicity keys are base-3 numbers with one digit per edge
    bound = 2 * sum(w) if len(w) <= 39 else _LIMIT
    return _native(bound).tour_bruteforce(n, us, vs, w, t_mask)


def matching_dp(k: int, dist: list[int]) -> tuple[int, list[int]]:
    return _native(sum(dist)).matching_dp(k, dist)
