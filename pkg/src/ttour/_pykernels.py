"""Pure-Python bitmask kernels, the fallback for ``_ckernels``.

Results match the compiled module exactly, including tie-breaking.
Python ints never overflow, so these also serve oversized weights.
"""

from __future__ import annotations


def subset_loads(n: int, us: list[int], vs: list[int], w: list[int]) -> list[int]:
    """Weight of delta(U) for every vertex subset U, indexed by bitmask."""
    incident: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a, b, wt in zip(us, vs, w):
        incident[a].append((b, wt))
        incident[b].append((a, wt))
    loads = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        bit = low.bit_length() - 1
        rest = mask ^ low
        acc = loads[rest]
        for other, wt in incident[bit]:
            # edge inside the old side stops crossing; edge to outside starts
            acc += -wt if (rest >> other) & 1 else wt
        loads[mask] = acc
    return loads


def min_partition(n: int, loads: list[int], block_offset: int) -> tuple[int, list[int]]:
    full = (1 << n) - 1
    dp = [0] * (full + 1)
    choice = [0] * (full + 1)
    for mask in range(1, full + 1):
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        best = 0
        best_sub = -1
        while True:
            cand = loads[low | sub] - block_offset + dp[rest ^ sub]
            if best_sub < 0 or cand < best or (cand == best and sub < best_sub):
                best, best_sub = cand, sub
            if sub == 0:
                break
            sub = (sub - 1) & rest
        dp[mask] = best
        choice[mask] = low | best_sub
    blocks = []
    mask = full
    while mask:
        blocks.append(choice[mask])
        mask ^= choice[mask]
    return dp[full], sorted(blocks)


def _tables(us: list[int], vs: list[int], w: list[int]) -> tuple[list[int], list[int]]:
    m = len(us)
    odd = [0] * (1 << m)
    csum = [0] * (1 << m)
    for mask in range(1, 1 << m):
        low = mask & -mask
        bit = low.bit_length() - 1
        odd[mask] = odd[mask ^ low] ^ (1 << us[bit]) ^ (1 << vs[bit])
        csum[mask] = csum[mask ^ low] + w[bit]
    return odd, csum


def join_bruteforce(n: int, us: list[int], vs: list[int], w: list[int],
                    target: int) -> tuple[int, int]:
    odd, csum = _tables(us, vs, w)
    best, best_mask = -1, -1
    for mask, parity in enumerate(odd):
        if parity == target and (best < 0 or csum[mask] < best):
            best, best_mask = csum[mask], mask
    return best, best_mask


def _spans(n: int, us: list[int], vs: list[int], support: int) -> bool:
    full = (1 << n) - 1
    reach, prev = 1, 0
    while reach != prev:
        prev = reach
        for e in range(len(us)):
            if (support >> e) & 1:
                if (reach >> us[e]) & 1:
                    reach |= 1 << vs[e]
                elif (reach >> vs[e]) & 1:
                    reach |= 1 << us[e]
    return reach == full


def tour_bruteforce(n: int, us: list[int], vs: list[int], w: list[int],
                    t_mask: int) -> tuple[int, list[int] | None]:
    m = len(us)
    odd, csum = _tables(us, vs, w)
    full = (1 << m) - 1
    best, best_key = -1, -1
    best_single = best_double = 0
    for single in range(1 << m):
        if odd[single] != t_mask:
            continue
        comp = full ^ single
        dbl = comp
        while True:
            cost = csum[single] + 2 * csum[dbl]
            if (best < 0 or cost <= best) and _spans(n, us, vs, single | dbl):
                key = 0
                for e in range(m):
                    key = key * 3 + ((single >> e) & 1) + 2 * ((dbl >> e) & 1)
                if best < 0 or cost < best or key < best_key:
                    best, best_key = cost, key
                    best_single, best_double = single, dbl
            if dbl == 0:
                break
            dbl = (dbl - 1) & comp
    if best < 0:
        return -1, None
    return best, [((best_single >> e) & 1) + 2 * ((best_double >> e) & 1) for e in range(m)]


def matching_dp(k: int, dist: list[int]) -> tuple[int, list[int]]:
    size = 1 << k
    dp = [-1] * size
    pick = [-1] * size
    dp[0] = 0
    for mask in range(1, size):
        if bin(mask).count("1") & 1:
            continue
        i = (mask & -mask).bit_length() - 1
        for j in range(i + 1, k):
            if (mask >> j) & 1:
                cand = dist[i * k + j] + dp[mask ^ (1 << i) ^ (1 << j)]
                if dp[mask] < 0 or cand < dp[mask]:
                    dp[mask] = cand
                    pick[mask] = j
    mate = [-1] * k
    mask = size - 1
    while mask:
        i = (mask & -mask).bit_length() - 1
        j = pick[mask]
        mate[i], mate[j] = j, i
        mask ^= (1 << i) | (1 << j)
    return dp[size - 1], mate
