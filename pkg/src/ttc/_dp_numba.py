"""Numba kernel for the subset-bipartition search.

The hot loop of the full optimal search enumerates every bipartition of
every tensor subset (3^n candidate pairs), which is pure bitmask and int64
arithmetic: the ideal case for ``@njit``.  The kernel is only entered when
the caller has proven that every possible accumulated cost fits in int64
(see ``search._kernel_choice``), so its arithmetic is exact, and it mirrors
the pure-Python lane candidate for candidate so both lanes return identical
trees, tie-breaks included.

Per subset ``S`` the kernel keeps the optimal cost, the chosen left child,
and the lexicographically smallest linearization (sequence of consumed
label bits) among minimum-cost trees; linearizations of all trees over the
same subset have equal length, so lexicographic comparison is well-defined.
"""

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _store_lin(lin, lin_len, S, A, B, cons, ncons):
    p = 0
    for j in range(lin_len[A]):
        lin[S, p] = lin[A, j]
        p += 1
    for j in range(lin_len[B]):
        lin[S, p] = lin[B, j]
        p += 1
    for j in range(ncons):
        lin[S, p] = cons[j]
        p += 1
    lin_len[S] = p


@njit(cache=True)
def _cand_less(lin, lin_len, A, B, cons, ncons, S):
    # candidate = lin[A] ++ lin[B] ++ cons[:ncons], compared against lin[S]
    p = 0
    for j in range(lin_len[A]):
        a = lin[A, j]
        b = lin[S, p]
        if a != b:
            return a < b
        p += 1
    for j in range(lin_len[B]):
        a = lin[B, j]
        b = lin[S, p]
        if a != b:
            return a < b
        p += 1
    for j in range(ncons):
        a = cons[j]
        b = lin[S, p]
        if a != b:
            return a < b
        p += 1
    return False


@njit(cache=True)
def dp_full(tmasks, dims_by_bit, npos):
    """Exact subset DP over all bipartitions, outer products included.

    tmasks: int64[n] trace-free label bitmask per tensor.
    dims_by_bit: int64[nbits] dimension per label bit.
    npos: number of positive-label bits (bits 0..npos-1; ascending bit order
        equals ascending label order, so consumed bits come out sorted).

    Returns (best, left, mask) arrays indexed by subset bitmask.
    """
    n = tmasks.shape[0]
    nbits = dims_by_bit.shape[0]
    size = 1 << n
    mask = np.zeros(size, np.int64)
    best = np.full(size, -1, np.int64)
    left = np.zeros(size, np.int64)
    lin_len = np.zeros(size, np.int32)
    width = npos if npos > 0 else 1
    lin = np.zeros((size, width), np.int32)
    cons = np.zeros(width, np.int32)

    for i in range(n):
        mask[1 << i] = tmasks[i]
        best[1 << i] = 0

    for S in range(1, size):
        if S & (S - 1) == 0:
            continue
        low = S & (-S)
        rest = S ^ low
        mask[S] = mask[low] ^ mask[rest]
        sub = rest
        while True:
            if sub != rest:
                S1 = low | sub
                S2 = S ^ S1
                m1 = mask[S1]
                m2 = mask[S2]
                union = m1 | m2
                c = np.int64(1)
                for b in range(nbits):
                    if (union >> b) & 1:
                        c *= dims_by_bit[b]
                tot = best[S1] + best[S2] + c
                if best[S] < 0 or tot <= best[S]:
                    cm = m1 & m2
                    ncons = 0
                    for b in range(npos):
                        if (cm >> b) & 1:
                            cons[ncons] = b
                            ncons += 1
                    if best[S] < 0 or tot < best[S]:
                        best[S] = tot
                        _store_lin(lin, lin_len, S, S1, S2, cons, ncons)
                        left[S] = S1
                        if _cand_less(lin, lin_len, S2, S1, cons, ncons, S):
                            _store_lin(lin, lin_len, S, S2, S1, cons, ncons)
                            left[S] = S2
                    else:
                        if _cand_less(lin, lin_len, S1, S2, cons, ncons, S):
                            _store_lin(lin, lin_len, S, S1, S2, cons, ncons)
                            left[S] = S1
                        if _cand_less(lin, lin_len, S2, S1, cons, ncons, S):
                            _store_lin(lin, lin_len, S, S2, S1, cons, ncons)
                            left[S] = S2
            if sub == 0:
                break
            sub = (sub - 1) & rest

    return best, left, mask
