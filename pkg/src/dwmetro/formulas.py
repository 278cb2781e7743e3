"""Closed-form Fisher-information references for the double-well array.

Everything here is an explicit function of the well count ``M`` and the
per-well filling ``n``; the exact numerical routes in :mod:`dwmetro.fisher`
are the ground truth these expressions are validated against (see the
``formulas-vs-oracle`` verification suite).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

__all__ = [
    "ScalingBounds",
    "scaling_bounds",
    "qfi_fock_loaded",
    "qfi_symmetric_css",
    "qfi_symmetric_css_forms",
    "OatMoments",
    "oat_moments",
    "qfi_oat",
    "qfi_oat_asymptote",
    "qfi_uniform_mixture",
    "ladder_weight_sum",
]


@dataclass(frozen=True)
class ScalingBounds:
    """Benchmark scalings for ``M`` wells with ``n`` bosons each."""

    sql: float  #: shot-noise scaling, M * n
    hl_local: float  #: independent-well Heisenberg scaling, M * n^2
    hl_global: float  #: array-wide Heisenberg scaling, (M * n)^2


def scaling_bounds(m_wells: int, n: int) -> ScalingBounds:
    _check_mn(m_wells, n)
    return ScalingBounds(
        sql=float(m_wells * n),
        hl_local=float(m_wells * n**2),
        hl_global=float((m_wells * n) ** 2),
    )


def _check_mn(m_wells: int, n: int, min_m: int = 1, min_n: int = 0) -> None:
    if m_wells < min_m:
        raise ValueError(f"need at least {min_m} well(s)")
    if n < min_n:
        raise ValueError(f"need at least {min_n} boson(s) per well")


def qfi_fock_loaded(m_wells: int, n: int) -> float:
    """Protocol QFI of one-sided number loading, ``M (n^2 + 2n) / 2``."""
    _check_mn(m_wells, n)
    return 0.5 * m_wells * (n**2 + 2 * n)


def qfi_symmetric_css(m_wells: int, n: int) -> float:
    """Protocol QFI of the balanced coherent-spin product state (exact).

    Special case of :func:`qfi_oat` at zero twisting.  Two wells are special
    (``2n``); longer arrays gain the ``M n^2 / 8`` collective term.
    """
    _check_mn(m_wells, n, min_m=2)
    if m_wells == 2:
        return 2.0 * n
    return m_wells * n**2 / 8.0 + (0.5 - 1.0 / math.sqrt(2.0)) * n**2 + m_wells * n


def qfi_symmetric_css_forms(m_wells: int, n: int) -> Tuple[float, float]:
    """Two historical arrangements of the balanced-CSS polynomial.

    Returned as ``(expanded, grouped)``; they are algebraically identical and
    kept only as a regression reference (both overcount the exact value of
    :func:`qfi_symmetric_css` for ``M >= 2``).
    """
    _check_mn(m_wells, n, min_n=2)
    expanded = (
        m_wells * n**2 / 8.0
        + 0.5 * (1.0 - math.sqrt(2.0)) * n**2
        + 0.25 * (3.5 * m_wells + 1.0) * n
    )
    grouped = (
        m_wells * n * (7.0 + n) / 8.0
        - n**2 / math.sqrt(2.0)
        + 0.5 * n * (n + 0.5)
    )
    return expanded, grouped


@dataclass(frozen=True)
class OatMoments:
    """Twisting-phase sums entering the twisted-state QFI."""

    g: complex  #: single-transfer sum; g(0) = n/2
    f: complex  #: double-transfer sum; f(0) = n(n-1)/4


def oat_moments(n: int, alpha: float) -> OatMoments:
    """Evaluate the two phase-weighted binomial sums at twisting angle ``alpha``."""
    if n < 1:
        raise ValueError("need at least one boson per well")
    half = 0.5**n
    g = 0j
    for m in range(1, n + 1):
        g += cmath.exp(-1j * alpha * (2 * m - 1)) * math.comb(n, m) * m
    g *= half
    f = 0j
    for m in range(2, n + 1):
        w = math.comb(n, m - 2) * math.comb(n, m)
        w *= m * (m - 1) * (n - m + 1) * (n - m + 2)
        f += cmath.exp(-4j * alpha * (m - 1)) * math.sqrt(w)
    f *= half
    return OatMoments(g=g, f=f)


def qfi_oat(m_wells: int, n: int, alpha: float) -> float:
    """Protocol QFI of the one-axis-twisted product state at angle ``alpha``.

    Exact for every ``M >= 2``, ``n >= 2``; assembled from the per-well
    variance and square moments of the mixed-frame generator, with the
    cross-well interference carried by the sums of :func:`oat_moments`.
    """
    _check_mn(m_wells, n, min_m=2, min_n=2)
    mom = oat_moments(n, alpha)
    v = n**2 / 8.0 + n / 8.0 - 0.5 * mom.f.real - mom.g.imag**2
    q = n**2 / 8.0 + n / 4.0
    if m_wells == 2:
        c = 2.0
    else:
        c = m_wells - 3.0 + 2.0 * math.sqrt(2.0)
    return (m_wells + 2) * v + (3 * m_wells - 2) * q - c * abs(mom.g) ** 2


def qfi_oat_asymptote(m_wells: int, n: int) -> float:
    """Leading large-``n`` plateau of the twisted-state QFI, ``M n^2 / 2``."""
    _check_mn(m_wells, n)
    return 0.5 * m_wells * n**2


def qfi_uniform_mixture(m_wells: int, n: int) -> float:
    """Protocol QFI of the per-well uniform number mixture.

    Wide-distribution limit of the Gaussian-weight family:
    ``(n^2 + 2n)(3M - 2) / 8``.
    """
    _check_mn(m_wells, n)
    return (n**2 + 2 * n) * (3 * m_wells - 2) / 8.0


def ladder_weight_sum(n: int) -> int:
    """Exact total squared ladder weight of one well, ``n(n+1)(n+2)/3``.

    Sums ``(n-m)(m+1) + m(n-m+1)`` over ``m = 0..n`` in integer arithmetic;
    the closed form is asserted in the tests.
    """
    if n < 0:
        raise ValueError("filling must be non-negative")
    total = 0
    for m in range(n + 1):
        total += (n - m) * (m + 1) + m * (n - m + 1)
    return total
