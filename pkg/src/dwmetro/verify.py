"""Cross-method verification suites.

Each check pits two independent computations of the same quantity against
each other and records the measured deviation.  The suites back the
``dwmetro verify`` subcommand; they are sized to finish comfortably on a
laptop (the full run is a few seconds of numerics plus JIT warm-up).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from . import fisher, formulas, operators as ops, states
from .fock import FockBasis
from .operators import apply_unitary, conjugate

__all__ = ["CheckResult", "VerifyReport", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


@dataclass(frozen=True)
class VerifyReport:
    suite: str
    results: List[CheckResult]
    elapsed: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> List[str]:
        out = []
        for r in self.results:
            tag = "ok  " if r.passed else "FAIL"
            out.append(f"{tag} {r.name}  (deviation {r.deviation:.3e}, tol {r.tolerance:.1e})")
        status = "PASSED" if self.passed else "FAILED"
        npass = sum(r.passed for r in self.results)
        out.append(
            f"suite {self.suite}: {status} ({npass}/{len(self.results)} checks, "
            f"{self.elapsed:.1f}s)"
        )
        return out


def _protocol_amps(basis: FockBasis, per_well, mixing=True):
    psi = states.product_state(basis, per_well)
    amps = psi.amps
    if mixing and basis.n_wells > 1:
        amps = apply_unitary(ops.sx_total(basis), math.pi / 2, amps)
    return amps


def _brute_protocol_qfi(m, n, local, mixing=True):
    basis = FockBasis(m, m * n)
    amps = _protocol_amps(basis, [local] * m, mixing)
    return fisher.qfi_pure(amps, ops.jy_total(basis)).value


# ---------------------------------------------------------------------------
# operators suite


def _checks_operators(add):
    # 2x2 generator matrix on a single well with one boson
    b11 = FockBasis(1, 1)
    jy = ops.jy_total(b11).to_dense()
    want = np.array([[0.0, 0.5j], [-0.5j, 0.0]])
    add("jy matrix (M=1, N=1)", np.abs(jy - want).max(), 1e-15)

    # intra-well generators commute across wells
    b32 = FockBasis(3, 2)
    mats = [ops.jy_local(b32, i).to_dense() for i in (1, 2, 3)]
    dev = max(
        np.abs(mats[i] @ mats[j] - mats[j] @ mats[i]).max()
        for i in range(3)
        for j in range(i + 1, 3)
    )
    add("[jy_i, jy_j] = 0 (M=3, N=2)", dev, 1e-14)

    # mixing generator spectrum on one shared boson
    b21 = FockBasis(2, 1)
    w = np.linalg.eigvalsh(ops.sx_total(b21).to_dense())
    add(
        "sx spectrum (M=2, N=1)",
        np.abs(np.sort(w) - np.array([-0.5, 0.0, 0.0, 0.5])).max(),
        1e-14,
    )

    # the mixing pulse on one particle equals the mode-space beam splitter
    b31 = FockBasis(3, 1)
    sx = ops.sx_total(b31)
    u_many = np.stack(
        [apply_unitary(sx, math.pi / 2, e) for e in np.eye(b31.dim, dtype=complex)],
        axis=1,
    )
    add(
        "single-particle beam splitter (M=3)",
        np.abs(u_many - ops.single_particle_mixing(3)).max(),
        1e-12,
    )

    # mixed-frame generator identities, both conjugation directions
    for i in (1, 2, 3):
        target = ops.sy_local(b32, i).to_dense()
        got = conjugate(ops.jy_local(b32, i), ops.sx_total(b32), math.pi / 2).to_dense()
        add(f"sy({i}) conjugation identity (M=3, N=2)", np.abs(got - target).max(), 1e-12)
    # mirror direction fixes the opposite neighbour signs
    s = 1 / math.sqrt(2)
    mirror = {
        1: s * (ops.jy_local(b32, 1).to_dense() - ops.coupler(b32, 2, "L").to_dense()),
        3: s * (ops.jy_local(b32, 3).to_dense() + ops.coupler(b32, 3, "R").to_dense()),
        2: 0.5
        * (
            ops.jy_local(b32, 2).to_dense()
            + ops.coupler(b32, 2, "Y").to_dense()
            + ops.coupler(b32, 2, "R").to_dense()
            - ops.coupler(b32, 3, "L").to_dense()
        ),
    }
    for i in (1, 2, 3):
        got = conjugate(ops.jy_local(b32, i), ops.sx_total(b32), -math.pi / 2).to_dense()
        add(
            f"sy({i}) mirror-direction identity (M=3, N=2)",
            np.abs(got - mirror[i]).max(),
            1e-12,
        )

    # unitary propagation: group law and norm conservation
    rng = np.random.default_rng(7)
    b22 = FockBasis(2, 4)
    psi = rng.normal(size=b22.dim) + 1j * rng.normal(size=b22.dim)
    psi /= np.linalg.norm(psi)
    sx22 = ops.sx_total(b22)
    one = apply_unitary(sx22, 0.7, apply_unitary(sx22, 0.4, psi))
    two = apply_unitary(sx22, 1.1, psi)
    add("unitary group law (M=2, N=4)", np.abs(one - two).max(), 1e-12)
    add("unitary norm conservation", abs(np.linalg.norm(two) - 1.0), 1e-12)
    krylov = apply_unitary(sx22, 1.1, psi, dense_threshold=1)
    add("dense vs Krylov propagation", np.abs(two - krylov).max(), 1e-10)


# ---------------------------------------------------------------------------
# fisher-cross suite


def _checks_fisher_cross(add):
    # pure-state routes agree on the four state families (M=2, n=2)
    b = FockBasis(2, 4)
    jy = ops.jy_total(b)
    zoo = {
        "fock": states.fock_amplitudes(2),
        "css": states.css_amplitudes(2, math.pi / 2),
        "oat": states.oat_amplitudes(2, 0.4),
        "noon": states.noon_local_amplitudes(2),
    }
    for name, local in zoo.items():
        amps = _protocol_amps(b, [local] * 2)
        pure = fisher.qfi_pure(amps, jy).value
        proj = np.outer(amps, amps.conj())
        spec = fisher.qfi_spectral(proj, jy).value
        zs = fisher.qfi_zero_split(proj, jy)
        dev = max(abs(pure - spec), abs(pure - zs.value))
        add(f"pure = spectral = zero-split ({name}, M=2, n=2)", dev, 1e-9)

    # diagonal mixtures: three routes (M=2, n=2), several widths
    sy = ops.sy_total(b)
    for sigma in (0.5, 1.0, None):
        w = states.gaussian_weights(2, sigma, uniform=sigma is None)
        dps = states.DiagonalProductState.iid(w, 2)
        rho = states.materialize_density(dps, b)
        spec = fisher.qfi_spectral(rho, sy).value
        spec_dense = fisher.qfi_spectral(rho.to_dense(), sy).value
        zs = fisher.qfi_zero_split(rho, sy).value
        dp = fisher.qfi_diagonal_product(dps).value
        dev = max(abs(spec - zs), abs(spec - dp), abs(spec - spec_dense))
        label = "uniform" if sigma is None else f"sigma={sigma}"
        add(f"spectral = zero-split = diagonal-product ({label}, M=2, n=2)", dev, 1e-8)

    # support-sparse vs dense spectral path (M=3, n=2)
    b3 = FockBasis(3, 6)
    sy3 = ops.sy_total(b3)
    dps3 = states.DiagonalProductState.iid(states.gaussian_weights(2, 0.7), 3)
    rho3 = states.materialize_density(dps3, b3)
    dev = abs(
        fisher.qfi_spectral(rho3, sy3).value
        - fisher.qfi_spectral(rho3.to_dense(), sy3).value
    )
    add("support-sparse vs dense spectral (M=3, n=2)", dev, 1e-10)

    # product fast path vs brute force
    worst = 0.0
    for alpha in (0.0, 0.3, 1.1):
        local = states.oat_amplitudes(2, alpha)
        worst = max(
            worst,
            abs(
                _brute_protocol_qfi(3, 2, local)
                - fisher.qfi_product_pure_fast([local] * 3).value
            ),
        )
    add("fast product vs brute (oat, M=3, n=2)", worst, 1e-8)
    local = states.css_amplitudes(3, math.pi / 2)
    add(
        "fast product vs brute (css, M=2, n=3)",
        abs(
            _brute_protocol_qfi(2, 3, local)
            - fisher.qfi_product_pure_fast([local] * 2).value
        ),
        1e-8,
    )

    # larger diagonal problem through the support-sparse path only
    dps34 = states.DiagonalProductState.iid(states.gaussian_weights(4, uniform=True), 3)
    b34 = FockBasis(3, 12)
    rho34 = states.materialize_density(dps34, b34)
    dev = abs(
        fisher.qfi_spectral(rho34, ops.sy_total(b34)).value
        - fisher.qfi_diagonal_product(dps34).value
    )
    add("diagonal-product vs support spectral (M=3, n=4)", dev, 1e-8)

    # number detection saturates the quantum bound at theta = 0
    for name, local in (("fock", zoo["fock"]), ("css", zoo["css"]), ("noon", zoo["noon"])):
        amps = _protocol_amps(b, [local] * 2)
        sv = states.StateVector(b, amps)
        cfi = fisher.cfi_number(sv, jy).value
        qfi = fisher.qfi_pure(amps, jy).value
        add(f"cfi = qfi at theta=0 ({name}, M=2, n=2)", abs(cfi - qfi), 1e-8)

    # finite differences track the analytic value on a real-amplitude probe
    sv = states.StateVector(b, _protocol_amps(b, [zoo["css"]] * 2, mixing=False))
    ana = fisher.cfi_number(sv, jy).value
    fd = fisher.cfi_number(sv, jy, 0.0, mode="finite-difference").value
    add("finite-difference vs analytic cfi (css, no mixing)", abs(fd - ana), 1e-4)


# ---------------------------------------------------------------------------
# formulas-vs-oracle suite


def _checks_formulas(add):
    # one-sided loading
    worst = 0.0
    for m, n in ((2, 2), (3, 2), (2, 3)):
        worst = max(
            worst,
            abs(
                _brute_protocol_qfi(m, n, states.fock_amplitudes(n))
                - formulas.qfi_fock_loaded(m, n)
            ),
        )
    add("fock-load formula vs brute", worst, 1e-8)

    # balanced CSS
    worst = 0.0
    for m, n in ((2, 2), (3, 2), (2, 3), (3, 3)):
        worst = max(
            worst,
            abs(
                _brute_protocol_qfi(m, n, states.css_amplitudes(n, math.pi / 2))
                - formulas.qfi_symmetric_css(m, n)
            ),
        )
    add("symmetric-css formula vs brute", worst, 1e-8)

    # twisted states over an angle grid
    for m, n in ((3, 2), (3, 3)):
        grid = np.linspace(0.0, math.pi, 21)
        worst = max(
            abs(
                _brute_protocol_qfi(m, n, states.oat_amplitudes(n, a))
                - formulas.qfi_oat(m, n, a)
            )
            for a in grid
        )
        add(f"oat formula vs brute (M={m}, n={n}, 21 angles)", worst, 1e-8)

    # oat reduces to the balanced CSS at zero twisting
    worst = 0.0
    for m in (2, 3, 5, 8):
        for n in (2, 5, 17, 50):
            a = formulas.qfi_oat(m, n, 0.0)
            c = formulas.qfi_symmetric_css(m, n)
            worst = max(worst, abs(a - c) / c)
    add("oat(alpha=0) = symmetric-css (relative)", worst, 1e-9)

    # the two historical CSS polynomials agree with each other
    worst = 0.0
    for m in range(1, 21):
        for n in (2, 3, 10, 47, 100, 200):
            e, g = formulas.qfi_symmetric_css_forms(m, n)
            worst = max(worst, abs(e - g) / max(abs(e), 1.0))
    add("css polynomial forms agree (M in [1,20], n in [2,200])", worst, 1e-9)

    # number-diagonal limits
    worst = 0.0
    for m, n in ((2, 2), (3, 2), (2, 3), (3, 4), (10, 20)):
        dps = states.DiagonalProductState.iid(states.gaussian_weights(n, uniform=True), m)
        got = fisher.qfi_diagonal_product(dps).value
        worst = max(worst, abs(got - formulas.qfi_uniform_mixture(m, n)))
    add("uniform mixture vs closed form", worst, 1e-10)
    worst = 0.0
    for m, n in ((2, 2), (3, 4), (10, 20)):
        dps = states.DiagonalProductState.iid(states.gaussian_weights(n, 1e-6), m)
        got = fisher.qfi_diagonal_product(dps).value
        ref = formulas.qfi_fock_loaded(m, n)
        worst = max(worst, abs(got - ref) / ref)
    add("narrow-width mixture vs fock-load formula (relative)", worst, 1e-6)

    # wide-distribution scaling heuristic
    ref = 0.375 * 10 * 20**2
    add(
        "uniform formula ~ (3/8) M n^2 at (10,20)",
        abs(formulas.qfi_uniform_mixture(10, 20) - ref) / ref,
        0.10,
    )

    # twisted-state plateau at figure scale
    grid = np.linspace(0.0, math.pi, 21)
    plateau_ref = formulas.qfi_oat_asymptote(10, 100)
    worst = 0.0
    for a in grid:
        if min(abs(a), abs(a - math.pi / 2), abs(a - math.pi)) < 0.3:
            continue
        worst = max(worst, abs(formulas.qfi_oat(10, 100, a) - plateau_ref) / plateau_ref)
    add("oat plateau within 5% of M n^2 / 2 (M=10, n=100)", worst, 0.05)

    # ladder weight sums, exact integers
    worst = 0
    for n in range(0, 51):
        direct = formulas.ladder_weight_sum(n)
        closed = n * (n + 1) * (n + 2) // 3
        worst = max(worst, abs(direct - closed))
    add("ladder weight sum = n(n+1)(n+2)/3 (n <= 50)", float(worst), 0.0)

    # scaling-bound ordering
    bad = 0.0
    for m in (2, 3, 5, 10):
        for n in (2, 5, 20, 100):
            b = formulas.scaling_bounds(m, n)
            fock = formulas.qfi_fock_loaded(m, n)
            css = formulas.qfi_symmetric_css(m, n)
            if not (b.sql <= css <= fock <= b.hl_global):
                bad += 1.0
    add("bound ordering sql <= css <= fock-load <= hl", bad, 0.0)


SUITES = {
    "operators": _checks_operators,
    "fisher-cross": _checks_fisher_cross,
    "formulas-vs-oracle": _checks_formulas,
}


def run_suite(suite: str) -> VerifyReport:
    """Run one named suite (or ``all``) and collect the report."""
    if suite == "all":
        fns = list(SUITES.values())
    elif suite in SUITES:
        fns = [SUITES[suite]]
    else:
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
    results: List[CheckResult] = []

    def add(name: str, deviation: float, tolerance: float):
        results.append(CheckResult(name, float(deviation), float(tolerance)))

    t0 = time.perf_counter()
    for fn in fns:
        fn(add)
    return VerifyReport(suite, results, time.perf_counter() - t0)
