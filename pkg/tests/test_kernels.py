"""The jit kernels and their pure-numpy twins must agree exactly."""

import os
import subprocess
import sys

import numpy as np

from dwmetro import _kernels as K
from dwmetro.fock import FockBasis, ModeId, Side


def _basis_arrays(m=2, total=3):
    basis = FockBasis(m, total)
    return basis, basis.states, basis._binom


def test_fill_states_pair():
    basis, states, _ = _basis_arrays()
    out = np.empty_like(states)
    K.fill_states_jit(states.shape[1], basis.total, out)
    np.testing.assert_array_equal(out, states)
    out2 = np.empty_like(states)
    K.fill_states_np(states.shape[1], basis.total, out2)
    np.testing.assert_array_equal(out2, states)


def test_rank_rows_pair():
    basis, states, binom = _basis_arrays()
    ident = np.arange(len(basis))
    np.testing.assert_array_equal(K.rank_rows_jit(states, binom, basis.total), ident)
    np.testing.assert_array_equal(K.rank_rows_np(states, binom, basis.total), ident)


def test_hop_arrays_pair():
    basis, states, binom = _basis_arrays(3, 2)
    t = ModeId(2, Side.LEFT).flat
    f = ModeId(1, Side.RIGHT).flat
    ra, ca, va = K.hop_arrays_jit(states, binom, basis.total, t, f)
    rb, cb, vb = K.hop_arrays_np(states, binom, basis.total, t, f)
    order_a = np.lexsort((ca, ra))
    order_b = np.lexsort((cb, rb))
    np.testing.assert_array_equal(ra[order_a], rb[order_b])
    np.testing.assert_array_equal(ca[order_a], cb[order_b])
    np.testing.assert_allclose(va[order_a], vb[order_b], atol=1e-15)
    # entries are A[target, source] = sqrt(n_f (n_t + 1))
    for r, c, v in zip(ra, ca, va):
        occ = states[c]
        assert abs(v - np.sqrt(occ[f] * (occ[t] + 1.0))) < 1e-13


def _random_spectral(rng, dim=9, zeros=2):
    p = rng.random(dim)
    p[:zeros] = 0.0
    p /= p.sum()
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    a2 = np.abs(a + a.conj().T) ** 2
    return p, a2


def test_pair_sum_dense_pair(rng):
    p, a2 = _random_spectral(rng)
    x = K.pair_sum_dense_jit(p, a2, 1e-12)
    y = K.pair_sum_dense_np(p, a2, 1e-12)
    assert abs(x - y) < 1e-10 * max(1.0, abs(x))


def test_zero_split_dense_pair(rng):
    p, a2 = _random_spectral(rng)
    xa, xb = K.zero_split_dense_jit(p, a2, 1e-12)
    ya, yb = K.zero_split_dense_np(p, a2, 1e-12)
    assert abs(xa - ya) < 1e-10 * max(1.0, abs(xa))
    assert abs(xb - yb) < 1e-10 * max(1.0, abs(xb))


def test_support_kernels_pair(rng):
    dim = 12
    p = rng.random(dim)
    p[p < 0.3] = 0.0
    p /= p.sum()
    rows = rng.integers(0, dim, size=40)
    cols = rng.integers(0, dim, size=40)
    keep = rows != cols
    rows, cols = rows[keep], cols[keep]
    v2 = rng.random(rows.size)
    x = K.pair_sum_support_jit(p, rows, cols, v2, 1e-12)
    y = K.pair_sum_support_np(p, rows, cols, v2, 1e-12)
    assert abs(x - y) < 1e-10 * max(1.0, abs(x))
    a = K.zero_split_support_jit(p, rows, cols, v2, 1e-12)
    b = K.zero_split_support_np(p, rows, cols, v2, 1e-12)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


def test_well_pair_terms_pair(rng):
    p = rng.random(6)
    p[2] = 0.0
    p /= p.sum()
    m = np.arange(5, dtype=float)
    dsq = (5.0 - m) * (m + 1.0)
    a = K.well_pair_terms_jit(p, dsq, 1e-12)
    b = K.well_pair_terms_np(p, dsq, 1e-12)
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_active_aliases_follow_flag():
    if K.USING_NUMBA:
        assert K.fill_states is K.fill_states_jit
        assert K.pair_sum_dense is K.pair_sum_dense_jit
    else:
        assert K.fill_states is K.fill_states_np
        assert K.pair_sum_dense is K.pair_sum_dense_np


def test_env_flag_forces_numpy_path():
    code = (
        "import dwmetro._kernels as k;"
        "print(k.USING_NUMBA, k.fill_states is k.fill_states_np)"
    )
    env = dict(os.environ, DWMETRO_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout.split() == ["False", "True"]
