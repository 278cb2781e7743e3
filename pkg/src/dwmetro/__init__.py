"""Exact Fisher-information toolkit for interferometry with arrays of bosonic double wells.

The package covers the full pipeline of a multi-well atom interferometer:
enumerated Fock bases and sparse mode operators (:mod:`dwmetro.fock`,
:mod:`dwmetro.operators`), input-state preparation (:mod:`dwmetro.states`),
exact quantum/classical Fisher information through several cross-checked
routes (:mod:`dwmetro.fisher`), closed-form references
(:mod:`dwmetro.formulas`), and a scenario runner with a CLI
(:mod:`dwmetro.harness`, :mod:`dwmetro.cli`).
"""

from ._kernels import USING_NUMBA
from .fock import DEFAULT_CAP, BasisTooLargeError, FockBasis, ModeId, Side

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "USING_NUMBA",
    "DEFAULT_CAP",
    "BasisTooLargeError",
    "FockBasis",
    "ModeId",
    "Side",
]
