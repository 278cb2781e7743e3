"""Basis enumeration, ranking, hops and sparse assembly."""

import math

import numpy as np
import pytest

from dwmetro import operators
from dwmetro.fock import (
    BasisTooLargeError,
    FockBasis,
    ModeId,
    Side,
    assemble,
    hop,
)

try:
    from hypothesis import given, settings
    from hypothesis import strategies as st

    HAVE_HYPOTHESIS = True
except ImportError:
    HAVE_HYPOTHESIS = False


@pytest.mark.parametrize("m,total", [(1, 0), (1, 3), (2, 2), (2, 5), (3, 4), (4, 3)])
def test_dimension_matches_combinatorics(m, total):
    basis = FockBasis(m, total)
    assert len(basis) == math.comb(total + 2 * m - 1, 2 * m - 1)
    assert basis.states.shape == (len(basis), 2 * m)
    np.testing.assert_array_equal(basis.states.sum(axis=1), total)


def test_enumeration_order_first_last():
    basis = FockBasis(2, 3)
    np.testing.assert_array_equal(basis.states[0], [3, 0, 0, 0])
    np.testing.assert_array_equal(basis.states[-1], [0, 0, 0, 3])
    # descending lexicographic: each row strictly precedes the next
    for i in range(len(basis) - 1):
        assert tuple(basis.states[i]) > tuple(basis.states[i + 1])


def test_rank_unrank_roundtrip(basis_3w6b):
    for i in range(len(basis_3w6b)):
        assert basis_3w6b.index_of(basis_3w6b.occupation(i)) == i


def test_index_of_rejects_bad_vectors(basis_2w2b):
    with pytest.raises(ValueError):
        basis_2w2b.index_of([1, 1, 0])  # wrong length
    with pytest.raises(ValueError):
        basis_2w2b.index_of([2, -1, 1, 0])  # negative
    with pytest.raises(ValueError):
        basis_2w2b.index_of([1, 1, 1, 0])  # wrong total


def test_mode_id_flat_layout():
    # interleaved layout: l1 r1 l2 r2 ...
    assert ModeId(1, Side.LEFT).flat == 0
    assert ModeId(1, Side.RIGHT).flat == 1
    assert ModeId(3, Side.LEFT).flat == 4
    for flat in range(8):
        assert ModeId.from_flat(flat).flat == flat


def test_hop_amplitudes():
    basis = FockBasis(1, 2)
    src = basis.index_of([2, 0])
    res = hop(basis, src, ModeId(1, Side.RIGHT), ModeId(1, Side.LEFT))
    assert res is not None
    tgt, amp = res
    np.testing.assert_array_equal(basis.occupation(tgt), [1, 1])
    assert abs(amp - math.sqrt(2.0)) < 1e-15  # sqrt(n_from (n_to + 1))
    # diagonal hop counts the source mode
    tgt2, amp2 = hop(basis, src, ModeId(1, Side.LEFT), ModeId(1, Side.LEFT))
    assert tgt2 == src and amp2 == 2.0


def test_hop_empty_source_returns_none():
    basis = FockBasis(1, 1)
    src = basis.index_of([1, 0])
    assert hop(basis, src, ModeId(1, Side.LEFT), ModeId(1, Side.RIGHT)) is None


def test_assemble_single_particle_jy():
    # one boson in one well: the generator is the 2x2 Pauli-y block / 2
    basis = FockBasis(1, 1)
    op = assemble(basis, operators.jy_terms(1))
    dense = op.to_dense()
    il, ir = basis.index_of([1, 0]), basis.index_of([0, 1])
    expect = np.zeros((2, 2), complex)
    expect[ir, il] = -0.5j  # target row, source column
    expect[il, ir] = +0.5j
    np.testing.assert_allclose(dense, expect, atol=1e-15)
    w = np.linalg.eigvalsh(dense)
    np.testing.assert_allclose(w, [-0.5, 0.5], atol=1e-14)


def test_assemble_detects_hermiticity(basis_1w2b):
    herm = assemble(basis_1w2b, operators.jy_terms(1))
    assert herm.hermitian
    lop = assemble(basis_1w2b, [(1.0, ModeId(1, Side.RIGHT), ModeId(1, Side.LEFT))])
    assert not lop.hermitian
    np.testing.assert_allclose(lop.dagger().to_dense(), lop.to_dense().conj().T)


def test_assemble_entry_order_deterministic(basis_2w4b):
    a = assemble(basis_2w4b, operators.sy_total_terms(2))
    b = assemble(basis_2w4b, operators.sy_total_terms(2))
    np.testing.assert_array_equal(a.rows, b.rows)
    np.testing.assert_array_equal(a.cols, b.cols)
    np.testing.assert_array_equal(a.vals, b.vals)
    # row-major sorted coordinates
    keys = a.rows.astype(np.int64) * len(basis_2w4b) + a.cols
    assert np.all(np.diff(keys) > 0)


def test_cap_guard_message():
    with pytest.raises(BasisTooLargeError, match="basis too large"):
        FockBasis(10, 1000)
    # the guard fires before any state array is allocated
    with pytest.raises(BasisTooLargeError):
        FockBasis(2, 4, cap=10)


def test_matvec_matches_dense(basis_2w2b, rng):
    op = operators.sy_total(basis_2w2b)
    psi = rng.normal(size=len(basis_2w2b)) + 1j * rng.normal(size=len(basis_2w2b))
    np.testing.assert_allclose(op.matvec(psi), op.to_dense() @ psi, atol=1e-12)


if HAVE_HYPOTHESIS:

    @given(st.integers(0, 6), st.integers(1, 3), st.data())
    @settings(max_examples=40, deadline=None)
    def test_rank_is_position_property(total, m, data):
        basis = FockBasis(m, total)
        i = data.draw(st.integers(0, len(basis) - 1))
        assert basis.index_of(basis.states[i]) == i
