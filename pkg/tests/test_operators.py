"""Generator algebra: spectra, commutators, frame changes, unitaries."""

import math
import threading

import numpy as np
import pytest

from dwmetro import operators
from dwmetro.fock import FockBasis


def _comm(a, b):
    return a @ b - b @ a


def test_jy_spectrum_is_half_integer_ladder():
    for n in (1, 2, 5):
        basis = FockBasis(1, n)
        w = np.linalg.eigvalsh(operators.jy_total(basis).to_dense())
        np.testing.assert_allclose(w, np.arange(-n / 2, n / 2 + 1), atol=1e-12)


def test_local_jy_commute(basis_2w4b):
    a = operators.jy_local(basis_2w4b, 1).to_dense()
    b = operators.jy_local(basis_2w4b, 2).to_dense()
    assert np.abs(_comm(a, b)).max() < 1e-14


def test_sx_single_particle_spectrum():
    # one boson over two coupled wells: the pair splits to +-1/2, spectators stay at 0
    basis = FockBasis(2, 1)
    w = np.linalg.eigvalsh(operators.sx_total(basis).to_dense())
    np.testing.assert_allclose(w, [-0.5, 0.0, 0.0, 0.5], atol=1e-12)


def test_sx_requires_two_wells():
    with pytest.raises(ValueError):
        operators.sx_total_terms(1)


def test_single_particle_mixing_blocks():
    m = 3
    u = operators.single_particle_mixing(m)
    assert u.shape == (2 * m, 2 * m)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(2 * m), atol=1e-14)
    s = 1.0 / math.sqrt(2.0)
    # spectators: l of the first well, r of the last well
    assert u[0, 0] == 1.0 and u[2 * m - 1, 2 * m - 1] == 1.0
    # each (r_i, l_{i+1}) pair mixes through the balanced beam-splitter block
    for i in range(1, m):
        ri, ln = 2 * i - 1, 2 * i
        block = u[np.ix_([ri, ln], [ri, ln])]
        np.testing.assert_allclose(block, [[s, -1j * s], [-1j * s, s]], atol=1e-15)


@pytest.mark.parametrize("m_wells,total", [(2, 2), (3, 2)])
def test_frame_change_produces_sy(m_wells, total):
    # conjugating J_y by the mixing pulse must land on the assembled S_y
    basis = FockBasis(m_wells, total)
    jy = operators.jy_total(basis)
    sx = operators.sx_total(basis)
    moved = operators.conjugate(jy, sx, math.pi / 2)
    direct = operators.sy_total(basis)
    dev = np.abs(moved.to_dense() - direct.to_dense()).max()
    assert dev < 1e-12


def test_coupler_kinds(basis_3w6b):
    for kind in ("L", "R", "Y"):
        op = operators.coupler(basis_3w6b, 2, kind)
        assert op.hermitian
    with pytest.raises(ValueError):
        operators.coupler_terms(2, "Q")


def test_apply_unitary_group_law(basis_2w2b, rng):
    gen = operators.sy_total(basis_2w2b)
    psi = rng.normal(size=len(basis_2w2b)) + 1j * rng.normal(size=len(basis_2w2b))
    psi /= np.linalg.norm(psi)
    one = operators.apply_unitary(gen, 0.7, operators.apply_unitary(gen, 0.4, psi))
    two = operators.apply_unitary(gen, 1.1, psi)
    assert np.abs(one - two).max() < 1e-12
    assert abs(np.linalg.norm(two) - 1.0) < 1e-12


def test_apply_unitary_krylov_matches_dense(basis_2w4b, rng):
    gen = operators.jy_total(basis_2w4b)
    psi = rng.normal(size=len(basis_2w4b)) + 1j * rng.normal(size=len(basis_2w4b))
    psi /= np.linalg.norm(psi)
    dense = operators.apply_unitary(gen, 0.9, psi)
    krylov = operators.apply_unitary(gen, 0.9, psi, dense_threshold=1)
    assert np.abs(dense - krylov).max() < 1e-10


def test_number_operator_total_and_mode(basis_2w2b):
    total = operators.number_operator(basis_2w2b).to_dense()
    np.testing.assert_allclose(total, 2.0 * np.eye(len(basis_2w2b)), atol=1e-14)
    n0 = operators.number_operator(basis_2w2b, 0).to_dense()
    np.testing.assert_allclose(np.diag(n0), basis_2w2b.states[:, 0], atol=1e-14)


def test_eigensystem_cached_across_threads(basis_1w2b):
    op = operators.jy_total(basis_1w2b)
    got = []

    def grab():
        got.append(op.eigensystem()[1])

    threads = [threading.Thread(target=grab) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(g is got[0] for g in got)
