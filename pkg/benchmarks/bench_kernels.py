#!/usr/bin/env python3
"""Time the compiled kernels against their pure-numpy twins.

Run from the repository root:

    python benchmarks/bench_kernels.py [--repeat K]

Each kernel is timed in both flavours on the same inputs; the jit flavour is
warmed once so compilation does not pollute the numbers.  Set
``DWMETRO_NO_NUMBA=1`` to confirm the fallback wiring (both columns then run
the same code).
"""

import argparse
import time

import numpy as np

from dwmetro import _kernels as K
from dwmetro.fock import FockBasis, ModeId, Side


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(repeat):
    basis = FockBasis(3, 9)  # dim 19448
    states = basis.states
    binom = basis._binom
    total = basis.total
    n_modes = states.shape[1]
    t = ModeId(2, Side.LEFT).flat
    f = ModeId(1, Side.RIGHT).flat

    dim = 600
    rng = np.random.default_rng(7)
    p = rng.random(dim)
    p[: dim // 3] = 0.0
    p /= p.sum()
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    a2 = np.abs(a + a.conj().T) ** 2

    nnz = 20000
    rows = rng.integers(0, dim, size=nnz)
    cols = rng.integers(0, dim, size=nnz)
    v2 = rng.random(nnz)

    n = 400
    wp = rng.random(n + 1)
    wp /= wp.sum()
    m = np.arange(n, dtype=np.float64)
    dsq = (n - m) * (m + 1.0)

    out = np.empty_like(states)
    cases = [
        ("fill_states (dim 19448)", lambda k: k(n_modes, total, out)),
        ("rank_rows (19448 rows)", lambda k: k(states, binom, total)),
        ("hop_arrays (19448 rows)", lambda k: k(states, binom, total, t, f)),
        ("pair_sum_dense (600^2)", lambda k: k(p, a2, 1e-12)),
        ("zero_split_dense (600^2)", lambda k: k(p, a2, 1e-12)),
        ("pair_sum_support (20k nnz)", lambda k: k(p, rows, cols, v2, 1e-12)),
        ("zero_split_support (20k nnz)", lambda k: k(p, rows, cols, v2, 1e-12)),
        ("well_pair_terms (n=400)", lambda k: k(wp, dsq, 1e-12)),
    ]
    pairs = [
        (K.fill_states_jit, K.fill_states_np),
        (K.rank_rows_jit, K.rank_rows_np),
        (K.hop_arrays_jit, K.hop_arrays_np),
        (K.pair_sum_dense_jit, K.pair_sum_dense_np),
        (K.zero_split_dense_jit, K.zero_split_dense_np),
        (K.pair_sum_support_jit, K.pair_sum_support_np),
        (K.zero_split_support_jit, K.zero_split_support_np),
        (K.well_pair_terms_jit, K.well_pair_terms_np),
    ]

    print(f"numba active: {K.USING_NUMBA}")
    print(f"{'kernel':30s} {'jit':>10s} {'numpy':>10s} {'speedup':>8s}")
    for (label, call), (kj, kn) in zip(cases, pairs):
        call(kj)  # warm the compiled flavour
        tj = _time(lambda: call(kj), repeat)
        tn = _time(lambda: call(kn), repeat)
        ratio = tn / tj if tj > 0 else float("inf")
        print(f"{label:30s} {tj * 1e3:9.2f}ms {tn * 1e3:9.2f}ms {ratio:7.1f}x")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions (best kept)")
    args = ap.parse_args()
    bench(args.repeat)
