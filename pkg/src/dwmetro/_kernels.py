"""Low-level numeric kernels.

Every kernel comes in two interchangeable flavours: a tight loop compiled
with numba (``*_jit``) and a vectorised/plain-python one (``*_np``).  The
module-level names without a suffix point at the active flavour, chosen at
import time.  Set ``DWMETRO_NO_NUMBA=1`` to force the numpy path (the same
switch is honoured everywhere in the package); benchmarks import both
flavours explicitly.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "USING_NUMBA",
    "fill_states",
    "rank_rows",
    "hop_arrays",
    "pair_sum_dense",
    "zero_split_dense",
    "pair_sum_support",
    "zero_split_support",
    "well_pair_terms",
]


def _numba_disabled() -> bool:
    return os.environ.get("DWMETRO_NO_NUMBA", "").strip() not in ("", "0")


USING_NUMBA = False
if not _numba_disabled():
    try:
        from numba import njit as _njit

        USING_NUMBA = True
    except ImportError:
        USING_NUMBA = False

if not USING_NUMBA:

    def _njit(*args, **kwargs):  # no-op decorator stand-in
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


# ---------------------------------------------------------------------------
# basis enumeration and ranking


def _fill_states_loop(n_modes, total, out):
    # Occupation vectors in descending lexicographic order: (N,0,...,0) first,
    # (0,...,0,N) last.  Successor rule: decrement the rightmost non-empty mode
    # left of the end, dump everything to its right (plus the borrowed boson)
    # into the next slot.
    dim = out.shape[0]
    occ = np.zeros(n_modes, dtype=np.int64)
    occ[0] = total
    for r in range(dim):
        for j in range(n_modes):
            out[r, j] = occ[j]
        if r == dim - 1:
            break
        j = n_modes - 2
        while occ[j] == 0:
            j -= 1
        occ[j] -= 1
        s = total
        for i in range(j + 1):
            s -= occ[i]
        occ[j + 1] = s
        for i in range(j + 2, n_modes):
            occ[i] = 0
    return out


fill_states_np = _fill_states_loop
fill_states_jit = _njit(cache=True)(_fill_states_loop)


def _rank_rows_loop(states, binom, total):
    # Position of each occupation vector in the descending-lex order, via the
    # combinatorial number system: states preceding `occ` at slot j number
    # C(rem - occ_j - 1 + b, b) with b = K-1-j and rem the bosons not yet placed.
    m, k = states.shape
    out = np.empty(m, dtype=np.int64)
    for r in range(m):
        rem = total
        acc = 0
        for j in range(k - 1):
            o = states[r, j]
            b = k - 1 - j
            a = rem - o - 1 + b
            if a >= b:
                acc += binom[a, b]
            rem -= o
        out[r] = acc
    return out


def _rank_rows_np(states, binom, total):
    m, k = states.shape
    if k == 1:
        return np.zeros(m, dtype=np.int64)
    prefix = np.cumsum(states, axis=1)
    rem = total - prefix + states  # rem[:, j] = bosons left to place at slot j
    b = (k - 1 - np.arange(k - 1))[None, :]
    a = rem[:, :-1] - states[:, :-1] - 1 + b
    vals = binom[a, np.broadcast_to(b, a.shape)]
    vals = np.where(a >= b, vals, 0)
    return vals.sum(axis=1)


rank_rows_np = _rank_rows_np
rank_rows_jit = _njit(cache=True)(_rank_rows_loop)


def _hop_arrays_loop(states, binom, total, t, f):
    # COO data of the single hop a^dag_t a_f over the whole basis; rows are
    # target states, columns sources (matrix convention A[target, source]).
    m, k = states.shape
    rows = np.empty(m, dtype=np.int64)
    cols = np.empty(m, dtype=np.int64)
    amps = np.empty(m, dtype=np.float64)
    scratch = np.empty(k, dtype=np.int64)
    cnt = 0
    for r in range(m):
        nf = states[r, f]
        if nf == 0:
            continue
        if t == f:
            rows[cnt] = r
            cols[cnt] = r
            amps[cnt] = nf
            cnt += 1
            continue
        nt = states[r, t]
        for j in range(k):
            scratch[j] = states[r, j]
        scratch[f] -= 1
        scratch[t] += 1
        rem = total
        acc = 0
        for j in range(k - 1):
            o = scratch[j]
            b = k - 1 - j
            a = rem - o - 1 + b
            if a >= b:
                acc += binom[a, b]
            rem -= o
        rows[cnt] = acc
        cols[cnt] = r
        amps[cnt] = np.sqrt(nf * (nt + 1.0))
        cnt += 1
    return rows[:cnt].copy(), cols[:cnt].copy(), amps[:cnt].copy()


def _hop_arrays_np(states, binom, total, t, f):
    nf = states[:, f]
    mask = nf > 0
    sources = np.flatnonzero(mask).astype(np.int64)
    if t == f:
        return sources, sources.copy(), nf[mask].astype(np.float64)
    nt = states[mask, t]
    moved = states[mask].copy()
    moved[:, f] -= 1
    moved[:, t] += 1
    targets = _rank_rows_np(moved, binom, total).astype(np.int64)
    amps = np.sqrt(nf[mask] * (nt + 1.0))
    return targets, sources, amps


hop_arrays_np = _hop_arrays_np
hop_arrays_jit = _njit(cache=True)(_hop_arrays_loop)


# ---------------------------------------------------------------------------
# spectral pair sums for Fisher information


def _pair_sum_dense_loop(p, a2, eps):
    # 2 * sum_{i != j} (p_i - p_j)^2 / (p_i + p_j) * a2[i, j], skipping pairs
    # with vanishing total weight.  a2 must be symmetric (|G|^2 in eigenbasis).
    d = p.shape[0]
    acc = 0.0
    for i in range(d):
        pi = p[i]
        for j in range(i + 1, d):
            s = pi + p[j]
            if s > eps:
                diff = pi - p[j]
                acc += 4.0 * diff * diff / s * a2[i, j]
    return acc


def _pair_sum_dense_np(p, a2, eps):
    s = p[:, None] + p[None, :]
    num = (p[:, None] - p[None, :]) ** 2
    safe = np.where(s > eps, s, 1.0)
    w = np.where(s > eps, num / safe, 0.0)
    return float(2.0 * np.sum(w * a2))


pair_sum_dense_np = _pair_sum_dense_np
pair_sum_dense_jit = _njit(cache=True)(_pair_sum_dense_loop)


def _zero_split_dense_loop(p, a2, eps):
    # Restricted-support pieces: i1 over pairs with both weights above eps,
    # i3 = -4 * sum_{i,j in support} p_i a2[i, j] (diagonal included).
    d = p.shape[0]
    i1 = 0.0
    i3 = 0.0
    for i in range(d):
        if p[i] <= eps:
            continue
        for j in range(d):
            if p[j] <= eps:
                continue
            i3 += p[i] * a2[i, j]
            if j > i:
                s = p[i] + p[j]
                diff = p[i] - p[j]
                i1 += 4.0 * diff * diff / s * a2[i, j]
    return i1, -4.0 * i3


def _zero_split_dense_np(p, a2, eps):
    mask = p > eps
    pm = p[mask]
    sub = a2[np.ix_(mask, mask)]
    i1 = _pair_sum_dense_np(pm, sub, 0.0)
    i3 = -4.0 * float(np.sum(pm[:, None] * sub))
    return i1, i3


zero_split_dense_np = _zero_split_dense_np
zero_split_dense_jit = _njit(cache=True)(_zero_split_dense_loop)


def _pair_sum_support_loop(p, rows, cols, v2, eps):
    # Same pair sum for a diagonal density: iterate sparse entries of G.
    # Hermitian COO lists each unordered pair twice, hence the factor 2.
    acc = 0.0
    for k in range(rows.shape[0]):
        r = rows[k]
        c = cols[k]
        if r == c:
            continue
        s = p[r] + p[c]
        if s > eps:
            d = p[r] - p[c]
            acc += 2.0 * d * d / s * v2[k]
    return acc


def _pair_sum_support_np(p, rows, cols, v2, eps):
    off = rows != cols
    pr = p[rows[off]]
    pc = p[cols[off]]
    s = pr + pc
    safe = np.where(s > eps, s, 1.0)
    w = np.where(s > eps, (pr - pc) ** 2 / safe, 0.0)
    return float(2.0 * np.sum(w * v2[off]))


pair_sum_support_np = _pair_sum_support_np
pair_sum_support_jit = _njit(cache=True)(_pair_sum_support_loop)


def _zero_split_support_loop(p, rows, cols, v2, eps):
    i1 = 0.0
    i2 = 0.0
    i3 = 0.0
    for k in range(rows.shape[0]):
        r = rows[k]
        c = cols[k]
        i2 += p[r] * v2[k]
        if p[r] > eps and p[c] > eps:
            i3 += p[r] * v2[k]
            if r != c:
                s = p[r] + p[c]
                d = p[r] - p[c]
                i1 += 2.0 * d * d / s * v2[k]
    return i1, 4.0 * i2, -4.0 * i3


def _zero_split_support_np(p, rows, cols, v2, eps):
    pr = p[rows]
    pc = p[cols]
    i2 = 4.0 * float(np.sum(pr * v2))
    both = (pr > eps) & (pc > eps)
    i3 = -4.0 * float(np.sum(pr[both] * v2[both]))
    off = both & (rows != cols)
    s = pr[off] + pc[off]
    i1 = float(2.0 * np.sum((pr[off] - pc[off]) ** 2 / s * v2[off]))
    return i1, i2, i3


zero_split_support_np = _zero_split_support_np
zero_split_support_jit = _njit(cache=True)(_zero_split_support_loop)


def _well_pair_terms_loop(p, dsq, eps):
    # Single-well ladder sums for diagonal product densities.  dsq[m] is the
    # squared ladder weight between adjacent occupations m and m+1; the
    # 1/4 from the generator matrix elements is already folded in here.
    n1 = 0.0
    n3 = 0.0
    for m in range(dsq.shape[0]):
        a = p[m]
        b = p[m + 1]
        if a > eps and b > eps:
            d = a - b
            n1 += d * d / (a + b) * dsq[m]
            n3 += (a + b) * dsq[m]
    return n1, n3


def _well_pair_terms_np(p, dsq, eps):
    a = p[:-1]
    b = p[1:]
    both = (a > eps) & (b > eps)
    s = np.where(both, a + b, 1.0)
    n1 = float(np.sum(np.where(both, (a - b) ** 2 / s * dsq, 0.0)))
    n3 = float(np.sum(np.where(both, (a + b) * dsq, 0.0)))
    return n1, n3


well_pair_terms_np = _well_pair_terms_np
well_pair_terms_jit = _njit(cache=True)(_well_pair_terms_loop)


if USING_NUMBA:
    fill_states = fill_states_jit
    rank_rows = rank_rows_jit
    hop_arrays = hop_arrays_jit
    pair_sum_dense = pair_sum_dense_jit
    zero_split_dense = zero_split_dense_jit
    pair_sum_support = pair_sum_support_jit
    zero_split_support = zero_split_support_jit
    well_pair_terms = well_pair_terms_jit
else:
    fill_states = fill_states_np
    rank_rows = rank_rows_np
    hop_arrays = hop_arrays_np
    pair_sum_dense = pair_sum_dense_np
    zero_split_dense = zero_split_dense_np
    pair_sum_support = pair_sum_support_np
    zero_split_support = zero_split_support_np
    well_pair_terms = well_pair_terms_np
