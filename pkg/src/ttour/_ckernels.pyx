# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitmask kernels. Same signatures and results as ``_pykernels``.

All weights are integers (callers scale rationals to a common denominator)
and must fit in signed 64-bit arithmetic; ``ttour.kernels`` checks that.
"""

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef i64* _to_c(list values) except NULL:
    cdef Py_ssize_t k, n = len(values)
    cdef i64* out = <i64*> malloc((n + 1) * sizeof(i64))
    if out == NULL:
        raise MemoryError()
    for k in range(n):
        out[k] = values[k]
    return out


def subset_loads(int n, list us, list vs, list w):
    """Weight of delta(U) for every vertex subset U, indexed by bitmask."""
    cdef Py_ssize_t m = len(us), e
    cdef i64 size = (<i64> 1) << n, mask
    cdef i64* cu = _to_c(us)
    cdef i64* cv = _to_c(vs)
    cdef i64* cw = _to_c(w)
    cdef i64* out = <i64*> malloc(size * sizeof(i64))
    cdef i64 acc
    try:
        for mask in range(size):
            acc = 0
            for e in range(m):
                if ((mask >> cu[e]) ^ (mask >> cv[e])) & 1:
                    acc += cw[e]
            out[mask] = acc
        return [out[mask] for mask in range(size)]
    finally:
        free(cu); free(cv); free(cw); free(out)


def min_partition(int n, list loads, long long block_offset):
    """Minimise sum over blocks B of (loads[B] - block_offset) over all
    partitions of the n vertices. Returns (value, list of block masks)."""
    cdef i64 full = ((<i64> 1) << n) - 1
    cdef i64 size = full + 1, mask, low, rest, sub, cand, best, best_sub
    cdef i64* ld = _to_c(loads)
    cdef i64* dp = <i64*> malloc(size * sizeof(i64))
    cdef i64* choice = <i64*> malloc(size * sizeof(i64))
    try:
        dp[0] = 0
        choice[0] = 0
        for mask in range(1, size):
            low = mask & (-mask)
            rest = mask ^ low
            # blocks containing the lowest vertex: low | sub, sub ⊆ rest
            sub = rest
            best = 0
            best_sub = -1
            while True:
                cand = ld[low | sub] - block_offset + dp[rest ^ sub]
                if best_sub < 0 or cand < best or (cand == best and sub < best_sub):
                    best = cand
                    best_sub = sub
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
    finally:
        free(ld); free(dp); free(choice)


cdef void _tables(Py_ssize_t m, i64* cu, i64* cv, i64* cw, i64* odd, i64* csum):
    cdef i64 size = (<i64> 1) << m, mask, low
    cdef int bit
    odd[0] = 0
    csum[0] = 0
    for mask in range(1, size):
        low = mask & (-mask)
        bit = 0
        while not ((low >> bit) & 1):
            bit += 1
        odd[mask] = odd[mask ^ low] ^ ((<i64> 1) << cu[bit]) ^ ((<i64> 1) << cv[bit])
        csum[mask] = csum[mask ^ low] + cw[bit]


def join_bruteforce(int n, list us, list vs, list w, long long target):
    """Cheapest edge subset whose odd-degree vertex mask equals target.
    Returns (cost, edge mask), ties to the smaller mask; (-1, -1) if none."""
    cdef Py_ssize_t m = len(us)
    cdef i64 size = (<i64> 1) << m, mask, best = -1, best_mask = -1
    cdef i64* cu = _to_c(us)
    cdef i64* cv = _to_c(vs)
    cdef i64* cw = _to_c(w)
    cdef i64* odd = <i64*> malloc(size * sizeof(i64))
    cdef i64* csum = <i64*> malloc(size * sizeof(i64))
    try:
        _tables(m, cu, cv, cw, odd, csum)
        for mask in range(size):
            if odd[mask] == target and (best < 0 or csum[mask] < best):
                best = csum[mask]
                best_mask = mask
        return best, best_mask
    finally:
        free(cu); free(cv); free(cw); free(odd); free(csum)


cdef bint _spans(int n, Py_ssize_t m, i64* cu, i64* cv, i64 support):
    cdef i64 full = ((<i64> 1) << n) - 1, reach = 1, prev = 0
    cdef Py_ssize_t e
    while reach != prev:
        prev = reach
        for e in range(m):
            if (support >> e) & 1:
                if (reach >> cu[e]) & 1:
                    reach |= (<i64> 1) << cv[e]
                elif (reach >> cv[e]) & 1:
                    reach |= (<i64> 1) << cu[e]
    return reach == full


def tour_bruteforce(int n, list us, list vs, list w, long long t_mask):
    """Cheapest multiset with multiplicities in {0,1,2}, odd set t_mask and
    spanning connected support. Ties go to the lexicographically smallest
    multiplicity vector. Returns (cost, multiplicities) or (-1, None)."""
    cdef Py_ssize_t m = len(us), e
    cdef i64 size = (<i64> 1) << m, full = size - 1
    cdef i64 single, comp, dbl, cost, key, best = -1, best_key = -1
    cdef i64 best_single = 0, best_double = 0
    cdef i64* cu = _to_c(us)
    cdef i64* cv = _to_c(vs)
    cdef i64* cw = _to_c(w)
    cdef i64* odd = <i64*> malloc(size * sizeof(i64))
    cdef i64* csum = <i64*> malloc(size * sizeof(i64))
    try:
        _tables(m, cu, cv, cw, odd, csum)
        for single in range(size):
            if odd[single] != t_mask:
                continue
            comp = full ^ single
            dbl = comp
            while True:
                cost = csum[single] + 2 * csum[dbl]
                if best < 0 or cost <= best:
                    if _spans(n, m, cu, cv, single | dbl):
                        key = 0
                        for e in range(m):
                            key = key * 3 + ((single >> e) & 1) + 2 * ((dbl >> e) & 1)
                        if best < 0 or cost < best or key < best_key:
                            best = cost
                            best_key = key
                            best_single = single
                            best_double = dbl
                if dbl == 0:
                    break
                dbl = (dbl - 1) & comp
        if best < 0:
            return -1, None
        mults = [((best_single >> e) & 1) + 2 * ((best_double >> e) & 1) for e in range(m)]
        return best, mults
    finally:
        free(cu); free(cv); free(cw); free(odd); free(csum)


def matching_dp(int k, list dist):
    """Minimum-weight perfect matching on k (even) points by subset DP.
    dist is a flattened k*k matrix. Returns (cost, mate list)."""
    cdef i64 size = (<i64> 1) << k, full = size - 1, mask, cand, best
    cdef int i, j, bi, bj
    cdef i64* d = _to_c(dist)
    cdef i64* dp = <i64*> malloc(size * sizeof(i64))
    cdef int* pick = <int*> malloc(size * sizeof(int))
    try:
        dp[0] = 0
        for mask in range(1, size):
            dp[mask] = -1
            pick[mask] = -1
            if __builtin_popcountll(mask) & 1:
                continue
            i = 0
            while not ((mask >> i) & 1):
                i += 1
            for j in range(i + 1, k):
                if (mask >> j) & 1:
                    cand = d[i * k + j] + dp[mask ^ ((<i64> 1) << i) ^ ((<i64> 1) << j)]
                    if dp[mask] < 0 or cand < dp[mask]:
                        dp[mask] = cand
                        pick[mask] = j
        mate = [-1] * k
        mask = full
        while mask:
            bi = 0
            while not ((mask >> bi) & 1):
                bi += 1
            bj = pick[mask]
            mate[bi] = bj
            mate[bj] = bi
            mask ^= ((<i64> 1) << bi) | ((<i64> 1) << bj)
        return (dp[full] if k else 0), mate
    finally:
        free(d); free(dp); free(pick)


cdef extern from *:
    int __builtin_popcountll(unsigned long long)
