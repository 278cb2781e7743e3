"""Number-conserving Fock space for a 1D array of bosonic double wells.

An array of ``M`` double wells carries ``2M`` bosonic modes ordered
``(l_1, r_1, l_2, r_2, ...)``; the total boson number ``N`` is conserved.
Basis states are occupation vectors enumerated in descending lexicographic
order, so ``(N, 0, ..., 0)`` is index 0 and ``(0, ..., 0, N)`` is the last
index.  Ranking uses the combinatorial number system, which keeps lookups
allocation-free and thread-safe.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from . import _kernels

__all__ = [
    "DEFAULT_CAP",
    "Side",
    "ModeId",
    "BasisTooLargeError",
    "FockBasis",
    "hop",
    "assemble",
    "SparseOperator",
]

#: Default ceiling on the basis dimension for exact (enumerated) computations.
DEFAULT_CAP = 200_000


class Side(enum.Enum):
    """Which half of a double well a mode belongs to."""

    LEFT = "l"
    RIGHT = "r"


@dataclass(frozen=True)
class ModeId:
    """A single bosonic mode, addressed by well index (1-based) and side."""

    well: int
    side: Side

    @property
    def flat(self) -> int:
        """Position in the interleaved mode order ``(l_1, r_1, l_2, r_2, ...)``."""
        return 2 * (self.well - 1) + (0 if self.side is Side.LEFT else 1)

    @classmethod
    def from_flat(cls, index: int) -> "ModeId":
        return cls(index // 2 + 1, Side.LEFT if index % 2 == 0 else Side.RIGHT)

    def __repr__(self) -> str:
        return f"{self.side.value}{self.well}"


ModeLike = Union[ModeId, int]


def _flat(mode: ModeLike) -> int:
    return mode.flat if isinstance(mode, ModeId) else int(mode)


class BasisTooLargeError(RuntimeError):
    """Raised when an enumerated basis would exceed the configured cap."""


def _binom_table(a_max: int, b_max: int) -> np.ndarray:
    # Exact Pascal recurrence in python ints, clamped into int64.  Every entry
    # the ranking formula can actually read is bounded by the basis dimension,
    # which is <= the cap, so clamped cells are never consumed.
    clamp = 1 << 62
    rows = [[1] + [0] * b_max]
    for a in range(1, a_max + 1):
        prev = rows[-1]
        cur = [1] + [0] * b_max
        for b in range(1, b_max + 1):
            cur[b] = min(prev[b - 1] + prev[b], clamp)
        rows.append(cur)
    return np.array(rows, dtype=np.int64)


class FockBasis:
    """Enumerated occupation basis for ``n_wells`` double wells and ``total`` bosons."""

    __slots__ = ("n_wells", "total", "dim", "states", "cap", "_binom")

    def __init__(self, n_wells: int, total: int, cap: int = DEFAULT_CAP):
        if n_wells < 1:
            raise ValueError("need at least one well")
        if total < 0:
            raise ValueError("total boson number must be non-negative")
        n_modes = 2 * n_wells
        dim = math.comb(total + n_modes - 1, n_modes - 1)
        if dim > cap:
            raise BasisTooLargeError(
                f"basis too large: dimension {dim} exceeds cap {cap} "
                f"(n_wells={n_wells}, total={total})"
            )
        self.n_wells = n_wells
        self.total = total
        self.dim = dim
        self.cap = cap
        self._binom = _binom_table(total + n_modes - 1, n_modes - 1)
        states = np.empty((dim, n_modes), dtype=np.int64)
        _kernels.fill_states(n_modes, total, states)
        states.setflags(write=False)
        self.states = states

    @property
    def n_modes(self) -> int:
        return 2 * self.n_wells

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"FockBasis(n_wells={self.n_wells}, total={self.total}, dim={self.dim})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FockBasis)
            and other.n_wells == self.n_wells
            and other.total == self.total
        )

    def __hash__(self) -> int:
        return hash((self.n_wells, self.total))

    def occupation(self, index: int) -> np.ndarray:
        """Occupation vector of basis state ``index`` (a copy)."""
        return self.states[index].copy()

    def index_of(self, occupation: Sequence[int]) -> int:
        """Rank of an occupation vector in the descending-lex order."""
        occ = np.asarray(occupation, dtype=np.int64)
        if occ.shape != (self.n_modes,):
            raise ValueError(f"expected {self.n_modes} mode occupations")
        if occ.min() < 0 or occ.sum() != self.total:
            raise ValueError("occupation vector does not conserve the boson number")
        return int(_kernels.rank_rows(occ[None, :], self._binom, self.total)[0])


def hop(
    basis: FockBasis, index: int, to_mode: ModeLike, from_mode: ModeLike
) -> Optional[Tuple[int, float]]:
    """Apply ``a^dag_to a_from`` to basis state ``index``.

    Returns ``(target_index, amplitude)`` with amplitude
    ``sqrt(n_from (n_to + 1))`` (or ``n_from`` for the diagonal case), or
    ``None`` when the source mode is empty.
    """
    t, f = _flat(to_mode), _flat(from_mode)
    occ = basis.states[index]
    nf = int(occ[f])
    if nf == 0:
        return None
    if t == f:
        return index, float(nf)
    out = occ.copy()
    out[f] -= 1
    out[t] += 1
    return basis.index_of(out), math.sqrt(nf * (occ[t] + 1.0))


Term = Tuple[complex, ModeLike, ModeLike]


def assemble(basis: FockBasis, terms: Iterable[Term]) -> "SparseOperator":
    """Assemble ``sum_k c_k a^dag_{t_k} a_{f_k}`` into a sparse operator.

    Coefficients of repeated ``(to, from)`` pairs are merged first; the result
    is flagged hermitian when the merged coefficient list is self-adjoint.
    """
    merged: dict[Tuple[int, int], complex] = {}
    for coeff, to_mode, from_mode in terms:
        key = (_flat(to_mode), _flat(from_mode))
        if not (0 <= key[0] < basis.n_modes and 0 <= key[1] < basis.n_modes):
            raise ValueError(f"mode index out of range: {key}")
        merged[key] = merged.get(key, 0j) + complex(coeff)

    hermitian = True
    for (t, f), c in merged.items():
        back = merged.get((f, t), 0j)
        if abs(c - np.conj(back)) > 1e-13 * max(1.0, abs(c)):
            hermitian = False
            break

    parts_r, parts_c, parts_v = [], [], []
    for (t, f), c in merged.items():
        if c == 0:
            continue
        rows, cols, amps = _kernels.hop_arrays(basis.states, basis._binom, basis.total, t, f)
        parts_r.append(rows)
        parts_c.append(cols)
        parts_v.append(amps * c)

    if parts_r:
        rows = np.concatenate(parts_r)
        cols = np.concatenate(parts_c)
        vals = np.concatenate(parts_v).astype(np.complex128)
    else:
        rows = np.empty(0, dtype=np.int64)
        cols = np.empty(0, dtype=np.int64)
        vals = np.empty(0, dtype=np.complex128)

    # coalesce duplicates into row-major order for a deterministic layout
    if rows.size:
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        new_group = np.r_[True, (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])]
        starts = np.flatnonzero(new_group)
        vals = np.add.reduceat(vals, starts)
        rows, cols = rows[starts], cols[starts]
        keep = vals != 0
        rows, cols, vals = rows[keep], cols[keep], vals[keep]

    return SparseOperator(basis, rows, cols, vals, hermitian)


class SparseOperator:
    """Immutable sparse operator on a :class:`FockBasis`.

    Entries are stored as coalesced COO triples in row-major order, so the
    serialised form of an operator is reproducible.  CSR and eigensystem
    caches are built lazily under a lock; all reads are thread-safe.
    """

    __slots__ = ("basis", "rows", "cols", "vals", "hermitian", "_lock", "_csr", "_eig")

    def __init__(self, basis, rows, cols, vals, hermitian):
        self.basis = basis
        for arr in (rows, cols, vals):
            arr.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self.vals = vals
        self.hermitian = hermitian
        self._lock = threading.Lock()
        self._csr = None
        self._eig = None

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.basis.dim, self.basis.dim)

    @property
    def nnz(self) -> int:
        return self.vals.size

    def entries(self) -> Iterator[Tuple[int, int, complex]]:
        """Iterate ``(row, col, value)`` triples in deterministic order."""
        for r, c, v in zip(self.rows, self.cols, self.vals):
            yield int(r), int(c), complex(v)

    def tocsr(self) -> sp.csr_matrix:
        with self._lock:
            if self._csr is None:
                self._csr = sp.csr_matrix(
                    (self.vals, (self.rows, self.cols)), shape=self.shape
                )
            return self._csr

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.complex128)
        out[self.rows, self.cols] = self.vals
        return out

    def matvec(self, psi: np.ndarray) -> np.ndarray:
        return self.tocsr() @ psi

    def __matmul__(self, other):
        if isinstance(other, np.ndarray):
            return self.matvec(other)
        return NotImplemented

    def dagger(self) -> "SparseOperator":
        order = np.lexsort((self.rows, self.cols))
        return SparseOperator(
            self.basis,
            self.cols[order].copy(),
            self.rows[order].copy(),
            np.conj(self.vals[order]),
            self.hermitian,
        )

    def expectation(self, psi: np.ndarray) -> complex:
        val = np.vdot(psi, self.matvec(psi))
        return val.real if self.hermitian else val

    def eigensystem(self) -> Tuple[np.ndarray, np.ndarray]:
        """Dense eigendecomposition ``(w, V)``; cached, hermitian only."""
        if not self.hermitian:
            raise ValueError("eigensystem is only provided for hermitian operators")
        with self._lock:
            if self._eig is None:
                w, v = np.linalg.eigh(self.to_dense())
                w.setflags(write=False)
                v.setflags(write=False)
                self._eig = (w, v)
            return self._eig
