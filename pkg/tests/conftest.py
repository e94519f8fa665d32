"""Shared fixtures: small lattices and bases used across test modules."""
import pytest

from schwinger_ed import (
    CouplingSet,
    IntegratedCoulomb,
    LatticeSpec,
    QuantumLink,
    TruncatedInteger,
    enumerate_basis,
)


@pytest.fixture
def spec4():
    return LatticeSpec(4)


@pytest.fixture
def basis4_int(spec4):
    """N=4, half filling, links integrated out."""
    return enumerate_basis(spec4, IntegratedCoulomb(), 2)


@pytest.fixture
def basis4_trunc(spec4):
    """N=4, half filling, integer links truncated at |E| <= 2."""
    return enumerate_basis(spec4, TruncatedInteger(2), 2)


@pytest.fixture
def basis4_qlm(spec4):
    """N=4, half filling, spin-1 quantum links."""
    return enumerate_basis(spec4, QuantumLink(1.0), 2)


@pytest.fixture
def couplings():
    return CouplingSet(e_l=1.0, t=1.0, m=0.5)
