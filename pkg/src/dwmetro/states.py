"""Input states for the double-well array.

Per-well pure states with ``n`` bosons in a well are described by an
amplitude vector indexed by the number of bosons on the *left* site,
``m = 0 .. n`` (the right site holds ``n - m``).  Product states over the
array are assembled from one such vector per well.  Number-diagonal mixed
states are described by per-well weight vectors over the same index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .fock import FockBasis

__all__ = [
    "StateVector",
    "fock_amplitudes",
    "css_amplitudes",
    "oat_amplitudes",
    "noon_branch_amplitudes",
    "noon_local_amplitudes",
    "local_amplitudes",
    "product_state",
    "noon_global",
    "gaussian_weights",
    "DiagonalProductState",
    "DiagonalDensity",
    "materialize_density",
]


@dataclass(frozen=True)
class StateVector:
    """A normalised pure state over an enumerated basis."""

    basis: FockBasis
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128)
        if amps.shape != (self.basis.dim,):
            raise ValueError("amplitude vector does not match the basis dimension")
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > 1e-10:
            raise ValueError(f"state not normalised (norm {nrm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amps, other.amps))


def _binom_row(n: int) -> np.ndarray:
    return np.array([math.comb(n, m) for m in range(n + 1)], dtype=np.float64)


def fock_amplitudes(n: int, m_left: int = 0) -> np.ndarray:
    """Twin-site number state ``|m_left, n - m_left>``."""
    if not 0 <= m_left <= n:
        raise ValueError("m_left outside [0, n]")
    amp = np.zeros(n + 1, dtype=np.complex128)
    amp[m_left] = 1.0
    return amp


def css_amplitudes(n: int, theta: float, phi: float = 0.0) -> np.ndarray:
    """Coherent spin state of one well, polar angle ``theta``, azimuth ``phi``.

    ``theta = 0`` puts every boson on the right site; ``theta = pi/2`` is the
    balanced (binomial) superposition.
    """
    m = np.arange(n + 1)
    amp = (
        np.sqrt(_binom_row(n))
        * np.sin(theta / 2.0) ** m
        * np.cos(theta / 2.0) ** (n - m)
        * np.exp(1j * phi * m)
    )
    return amp.astype(np.complex128)


def oat_amplitudes(n: int, chi_t: float) -> np.ndarray:
    """Balanced superposition sheared by one-axis twisting for a time ``chi_t``."""
    m = np.arange(n + 1)
    base = np.sqrt(_binom_row(n) / 2.0**n)
    return (np.exp(-1j * chi_t * m**2) * base).astype(np.complex128)


def noon_branch_amplitudes(n: int, branch: int) -> np.ndarray:
    """Extremal ``Jy`` eigenstate of one well (``branch`` is +1 or -1)."""
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    m = np.arange(n + 1)
    base = np.sqrt(_binom_row(n) / 2.0**n)
    return ((branch * 1j) ** m * base).astype(np.complex128)


def noon_local_amplitudes(n: int) -> np.ndarray:
    """Equal superposition of the two extremal ``Jy`` branches of one well."""
    if n < 1:
        raise ValueError("need at least one boson per well")
    plus = noon_branch_amplitudes(n, +1)
    minus = noon_branch_amplitudes(n, -1)
    return (plus + minus) / math.sqrt(2.0)


def local_amplitudes(family: str, n: int, **params) -> np.ndarray:
    """Per-well amplitude vector for a named state family."""
    if family == "fock":
        return fock_amplitudes(n, params.get("m_left", 0))
    if family == "css":
        return css_amplitudes(n, params.get("theta", math.pi / 2), params.get("phi", 0.0))
    if family == "oat":
        return oat_amplitudes(n, params.get("chi_t", 0.0))
    if family == "noon":
        return noon_local_amplitudes(n)
    raise ValueError(f"unknown state family {family!r}")


def product_state(basis: FockBasis, per_well: Sequence[np.ndarray]) -> StateVector:
    """Product of per-well states, embedded in the enumerated basis.

    ``per_well[i]`` holds the amplitudes of well ``i+1`` over its left-site
    occupation; the per-well boson numbers must add up to the basis total.
    """
    if len(per_well) != basis.n_wells:
        raise ValueError("need one amplitude vector per well")
    ns = [len(a) - 1 for a in per_well]
    if any(n < 0 for n in ns) or sum(ns) != basis.total:
        raise ValueError("per-well boson numbers do not add up to the basis total")
    amps = np.zeros(basis.dim, dtype=np.complex128)
    occ = np.zeros(basis.n_modes, dtype=np.int64)
    for combo in np.ndindex(*[n + 1 for n in ns]):
        a = 1.0 + 0j
        for i, m in enumerate(combo):
            a *= per_well[i][m]
        if a == 0:
            continue
        for i, m in enumerate(combo):
            occ[2 * i] = m
            occ[2 * i + 1] = ns[i] - m
        amps[basis.index_of(occ)] = a
    return StateVector(basis, amps)


def noon_global(basis: FockBasis, n: int) -> StateVector:
    """Array-wide superposition of the two extremal ``Jy_total`` branches."""
    if basis.total != n * basis.n_wells:
        raise ValueError("basis total must equal n per well times the number of wells")
    plus = product_state(basis, [noon_branch_amplitudes(n, +1)] * basis.n_wells)
    minus = product_state(basis, [noon_branch_amplitudes(n, -1)] * basis.n_wells)
    return StateVector(basis, (plus.amps + minus.amps) / math.sqrt(2.0))


def gaussian_weights(n: int, sigma: Optional[float] = None, uniform: bool = False) -> np.ndarray:
    """Number-diagonal weights ``p(m) ~ exp(-m^2 / (2 sigma^2))`` on ``m = 0..n``.

    ``uniform=True`` gives the flat (``sigma -> infinity``) limit.  Small
    ``sigma`` collapses onto the all-right number state ``m = 0``.
    """
    if uniform:
        return np.full(n + 1, 1.0 / (n + 1))
    if sigma is None or sigma <= 0:
        raise ValueError("sigma must be positive (or pass uniform=True)")
    m = np.arange(n + 1, dtype=np.float64)
    w = np.exp(-(m**2) / (2.0 * sigma * sigma))
    return w / w.sum()


@dataclass(frozen=True)
class DiagonalProductState:
    """Product of per-well number-diagonal mixtures, ``n`` bosons per well."""

    n: int
    weights: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if not self.weights:
            raise ValueError("need at least one well")
        cleaned = []
        for w in self.weights:
            w = np.asarray(w, dtype=np.float64)
            if w.shape != (self.n + 1,):
                raise ValueError("each weight vector needs n + 1 entries")
            if w.min() < -1e-12 or abs(w.sum() - 1.0) > 1e-10:
                raise ValueError("weights must be a probability vector")
            w = np.clip(w, 0.0, None)
            w.setflags(write=False)
            cleaned.append(w)
        object.__setattr__(self, "weights", cleaned)

    @classmethod
    def iid(cls, weights: np.ndarray, n_wells: int) -> "DiagonalProductState":
        w = np.asarray(weights, dtype=np.float64)
        return cls(n=len(w) - 1, weights=[w] * n_wells)

    @property
    def n_wells(self) -> int:
        return len(self.weights)


class DiagonalDensity:
    """Density operator diagonal in the enumerated occupation basis."""

    __slots__ = ("basis", "diagonal")

    def __init__(self, basis: FockBasis, diagonal: np.ndarray):
        diagonal = np.asarray(diagonal, dtype=np.float64)
        if diagonal.shape != (basis.dim,):
            raise ValueError("diagonal does not match the basis dimension")
        if diagonal.min() < -1e-12:
            raise ValueError("density has a negative weight")
        if abs(diagonal.sum() - 1.0) > 1e-8:
            raise ValueError("density diagonal must sum to one")
        diagonal = np.clip(diagonal, 0.0, None)
        diagonal.setflags(write=False)
        self.basis = basis
        self.diagonal = diagonal

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal.astype(np.complex128))


def materialize_density(dps: DiagonalProductState, basis: FockBasis) -> DiagonalDensity:
    """Embed a diagonal product state into an enumerated basis.

    Basis states whose per-well totals deviate from ``n`` get weight zero.
    """
    if basis.n_wells != dps.n_wells or basis.total != dps.n * dps.n_wells:
        raise ValueError("basis does not match the diagonal product state")
    occ = basis.states
    diag = np.ones(basis.dim, dtype=np.float64)
    for i, w in enumerate(dps.weights):
        left = occ[:, 2 * i]
        right = occ[:, 2 * i + 1]
        ok = left + right == dps.n
        diag = np.where(ok, diag * w[np.clip(left, 0, dps.n)], 0.0)
    return DiagonalDensity(basis, diag)
