"""Collective-mode generators for the double-well array.

All operators are built from mode-hopping term lists so that the same
definitions feed both the enumerated sparse matrices (via
:func:`dwmetro.fock.assemble`) and the product-state fast paths that never
materialise a basis.

Conventions, fixed once and used everywhere:

* ``jy(i)``: intra-well imbalance generator ``(a_r^dag a_l - a_l^dag a_r)/2i``
  of well ``i``; the phase-imprint generator of the interferometer is
  ``jy_total``.
* ``sx(i)``: inter-well mixing term ``(a_r^(i)dag a_l^(i+1) + h.c.)/2``; the
  mixing pulse is ``exp(-i (pi/2) sx_total)``.
* ``sy(i)``: conjugation of ``jy(i)`` by the mixing pulse,
  ``e^{+i(pi/2)Sx} Jy^(i) e^{-i(pi/2)Sx}``, expanded into the closed
  combination of ``jy`` and the neighbour couplers below.
* ``coupler(i, "L")`` hops ``l_{i-1} <-> l_i``, ``coupler(i, "R")`` hops
  ``r_{i-1} <-> r_i`` (both ``2 <= i <= M``), and ``coupler(i, "Y")`` is the
  skew hop ``(a_l^(i+1)dag a_r^(i-1) - h.c.)/2i`` (``2 <= i <= M-1``).
"""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np
from scipy.sparse.linalg import expm_multiply

from .fock import FockBasis, ModeId, Side, SparseOperator, assemble

__all__ = [
    "DENSE_EIG_THRESHOLD",
    "jy_terms",
    "sx_terms",
    "coupler_terms",
    "sy_local_terms",
    "jy_total_terms",
    "sx_total_terms",
    "sy_total_terms",
    "jy_local",
    "jy_total",
    "sx_local",
    "sx_total",
    "coupler",
    "sy_local",
    "sy_total",
    "number_operator",
    "apply_unitary",
    "conjugate",
    "single_particle_mixing",
]

#: Below this dimension unitaries are applied through a cached dense
#: eigendecomposition; above it a sparse Krylov evaluation is used.
DENSE_EIG_THRESHOLD = 2000

HopTerm = Tuple[complex, ModeId, ModeId]


def _l(i: int) -> ModeId:
    return ModeId(i, Side.LEFT)


def _r(i: int) -> ModeId:
    return ModeId(i, Side.RIGHT)


def _check_well(i: int, n_wells: int, lo: int = 1, hi_off: int = 0) -> None:
    hi = n_wells + hi_off
    if not lo <= i <= hi:
        raise ValueError(f"well index {i} outside [{lo}, {hi}]")


def jy_terms(i: int) -> List[HopTerm]:
    """Hop terms of ``Jy`` for well ``i``: ``(a_r^dag a_l - a_l^dag a_r)/2i``."""
    return [(-0.5j, _r(i), _l(i)), (0.5j, _l(i), _r(i))]


def sx_terms(i: int) -> List[HopTerm]:
    """Hop terms of the mixing link between wells ``i`` and ``i+1``."""
    return [(0.5, _r(i), _l(i + 1)), (0.5, _l(i + 1), _r(i))]


def coupler_terms(i: int, kind: str) -> List[HopTerm]:
    """Hop terms of the neighbour couplers ``L``, ``R`` and ``Y``."""
    if kind == "L":
        return [(0.5, _l(i - 1), _l(i)), (0.5, _l(i), _l(i - 1))]
    if kind == "R":
        return [(0.5, _r(i - 1), _r(i)), (0.5, _r(i), _r(i - 1))]
    if kind == "Y":
        return [(-0.5j, _l(i + 1), _r(i - 1)), (0.5j, _r(i - 1), _l(i + 1))]
    raise ValueError(f"unknown coupler kind {kind!r}")


def _scaled(terms: List[HopTerm], factor: complex) -> List[HopTerm]:
    return [(c * factor, t, f) for c, t, f in terms]


def sy_local_terms(i: int, n_wells: int) -> List[HopTerm]:
    """Hop expansion of the mixed-frame generator of well ``i``.

    Edge wells pick up one neighbour coupler with weight ``1/sqrt(2)``;
    interior wells combine both couplers and the skew hop with weight
    ``1/2``.  For a single well the mixing pulse is empty and the generator
    reduces to ``jy``.
    """
    _check_well(i, n_wells)
    if n_wells == 1:
        return jy_terms(i)
    s = 1.0 / math.sqrt(2.0)
    if i == 1:
        return _scaled(jy_terms(1) + coupler_terms(2, "L"), s)
    if i == n_wells:
        return _scaled(jy_terms(n_wells), s) + _scaled(coupler_terms(n_wells, "R"), -s)
    return (
        _scaled(jy_terms(i), 0.5)
        + _scaled(coupler_terms(i, "R"), -0.5)
        + _scaled(coupler_terms(i + 1, "L"), 0.5)
        + _scaled(coupler_terms(i, "Y"), 0.5)
    )


def jy_total_terms(n_wells: int) -> List[HopTerm]:
    out: List[HopTerm] = []
    for i in range(1, n_wells + 1):
        out += jy_terms(i)
    return out


def sx_total_terms(n_wells: int) -> List[HopTerm]:
    if n_wells < 2:
        raise ValueError("mixing requires at least two wells")
    out: List[HopTerm] = []
    for i in range(1, n_wells):
        out += sx_terms(i)
    return out


def sy_total_terms(n_wells: int) -> List[HopTerm]:
    out: List[HopTerm] = []
    for i in range(1, n_wells + 1):
        out += sy_local_terms(i, n_wells)
    return out


def jy_local(basis: FockBasis, i: int) -> SparseOperator:
    _check_well(i, basis.n_wells)
    return assemble(basis, jy_terms(i))


def jy_total(basis: FockBasis) -> SparseOperator:
    return assemble(basis, jy_total_terms(basis.n_wells))


def sx_local(basis: FockBasis, i: int) -> SparseOperator:
    _check_well(i, basis.n_wells, hi_off=-1)
    return assemble(basis, sx_terms(i))


def sx_total(basis: FockBasis) -> SparseOperator:
    return assemble(basis, sx_total_terms(basis.n_wells))


def coupler(basis: FockBasis, i: int, kind: str) -> SparseOperator:
    if kind in ("L", "R"):
        _check_well(i, basis.n_wells, lo=2)
    elif kind == "Y":
        _check_well(i, basis.n_wells, lo=2, hi_off=-1)
    return assemble(basis, coupler_terms(i, kind))


def sy_local(basis: FockBasis, i: int) -> SparseOperator:
    return assemble(basis, sy_local_terms(i, basis.n_wells))


def sy_total(basis: FockBasis) -> SparseOperator:
    return assemble(basis, sy_total_terms(basis.n_wells))


def number_operator(basis: FockBasis, mode=None) -> SparseOperator:
    """Number operator of one mode, or of all modes when ``mode`` is None."""
    if mode is None:
        terms = [(1.0 + 0j, m, m) for m in range(basis.n_modes)]
    else:
        terms = [(1.0 + 0j, mode, mode)]
    return assemble(basis, terms)


def apply_unitary(
    gen: SparseOperator,
    angle: float,
    psi: np.ndarray,
    dense_threshold: int = DENSE_EIG_THRESHOLD,
) -> np.ndarray:
    """Apply ``exp(-i * angle * gen)`` to a state vector.

    Hermitian generators only.  Small problems go through the cached dense
    eigendecomposition; larger ones through a converged sparse Krylov
    polynomial evaluation.  The output norm matches the input norm to 1e-12.
    """
    if not gen.hermitian:
        raise ValueError("unitary evolution needs a hermitian generator")
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (gen.basis.dim,):
        raise ValueError("state dimension does not match the basis")
    if angle == 0.0:
        return psi.copy()
    if gen.basis.dim < dense_threshold:
        w, v = gen.eigensystem()
        return v @ (np.exp(-1j * angle * w) * (v.conj().T @ psi))
    return expm_multiply(-1j * angle * gen.tocsr(), psi)


def conjugate(
    gen: SparseOperator,
    frame_gen: SparseOperator,
    angle: float,
    drop_tol: float = 1e-14,
) -> SparseOperator:
    """Heisenberg transform ``exp(+i*angle*K) G exp(-i*angle*K)``.

    Evaluated densely through the eigensystem of ``K`` and re-sparsified,
    dropping entries below ``drop_tol``.  Intended for moderate dimensions
    (verification of operator identities), not for the large-scale paths.
    """
    if gen.basis is not frame_gen.basis and gen.basis != frame_gen.basis:
        raise ValueError("operators live on different bases")
    w, v = frame_gen.eigensystem()
    phase = np.exp(-1j * angle * w)
    u = (v * phase) @ v.conj().T  # exp(-i*angle*K)
    dense = u.conj().T @ gen.to_dense() @ u
    dense[np.abs(dense) < drop_tol] = 0
    rows, cols = np.nonzero(dense)
    order = np.lexsort((cols, rows))
    rows, cols = rows[order].astype(np.int64), cols[order].astype(np.int64)
    vals = dense[rows, cols]
    herm = gen.hermitian and bool(
        np.all(np.abs(dense - dense.conj().T) < 100 * drop_tol)
    )
    return SparseOperator(gen.basis, rows, cols, vals, herm)


def single_particle_mixing(n_wells: int) -> np.ndarray:
    """Mode-space matrix of the mixing pulse ``exp(-i (pi/2) sx_total)``.

    Acts on the ``2M`` mode amplitudes: each linked pair ``(r_i, l_{i+1})``
    is sent through a 50:50 beam splitter ``(a, b) -> ((a - i b)/sqrt(2),
    (b - i a)/sqrt(2))``, while the unpaired edge modes ``l_1`` and ``r_M``
    are left untouched.
    """
    if n_wells < 2:
        return np.eye(2, dtype=np.complex128)
    dim = 2 * n_wells
    u = np.eye(dim, dtype=np.complex128)
    s = 1.0 / math.sqrt(2.0)
    for i in range(1, n_wells):
        a = _r(i).flat
        b = _l(i + 1).flat
        u[a, a] = s
        u[b, b] = s
        u[a, b] = -1j * s
        u[b, a] = -1j * s
    return u
