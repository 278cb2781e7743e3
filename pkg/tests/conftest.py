"""Shared fixtures: small enumerated bases and the mixed-probe protocol."""

import math

import numpy as np
import pytest

from dwmetro import fisher, operators, states
from dwmetro.fock import FockBasis


@pytest.fixture(scope="session")
def basis_1w2b():
    # one well, two bosons (dim 3)
    return FockBasis(1, 2)


@pytest.fixture(scope="session")
def basis_2w2b():
    # two wells, one boson each (dim 10)
    return FockBasis(2, 2)


@pytest.fixture(scope="session")
def basis_2w4b():
    # two wells, two bosons each (dim 35)
    return FockBasis(2, 4)


@pytest.fixture(scope="session")
def basis_3w6b():
    # three wells, two bosons each (dim 462)
    return FockBasis(3, 6)


@pytest.fixture(scope="session")
def protocol_qfi():
    """Brute-force QFI of the full protocol: product state, mixing pulse, J_y."""

    def run(m_wells, n, local_amps, mixing=True):
        basis = FockBasis(m_wells, m_wells * n)
        amps = states.product_state(basis, [local_amps] * m_wells).amps
        if mixing and m_wells > 1:
            sx = operators.sx_total(basis)
            amps = operators.apply_unitary(sx, math.pi / 2, amps)
        return fisher.qfi_pure(amps, operators.jy_total(basis)).value

    return run


@pytest.fixture(scope="session")
def protocol_probe():
    """Mixed probe state and generator, for CFI checks."""

    def run(m_wells, n, local_amps, mixing=True):
        basis = FockBasis(m_wells, m_wells * n)
        amps = states.product_state(basis, [local_amps] * m_wells).amps
        if mixing and m_wells > 1:
            sx = operators.sx_total(basis)
            amps = operators.apply_unitary(sx, math.pi / 2, amps)
        return states.StateVector(basis, amps), operators.jy_total(basis)

    return run


@pytest.fixture()
def rng():
    return np.random.default_rng(20260823)
