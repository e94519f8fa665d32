"""Lattice specs, gauge representations, and the lattice Coulomb kernel."""
import numpy as np
import pytest

from schwinger_ed import (
    CouplingSet,
    IntegratedCoulomb,
    LatticeSpec,
    QuantumLink,
    SchwingerBoson,
    TruncatedInteger,
    coulomb_matrix,
    coulomb_potential,
)
from schwinger_ed.errors import ConfigurationError
from schwinger_ed.lattice import GaussConvention


class TestLatticeSpec:
    def test_defaults(self):
        spec = LatticeSpec(4)
        assert spec.n_sites == 4
        assert spec.flavors == 1
        assert spec.lattice_spacing == 1.0
        assert spec.gauss_convention is GaussConvention.STAGGERED

    def test_requires_even_sites(self):
        with pytest.raises(ConfigurationError):
            LatticeSpec(5)

    def test_staggered_charge_offsets(self):
        spec = LatticeSpec(4)
        # offset F * (1 - (-1)^x) / 2: zero on even sites, F on odd sites
        assert list(spec.charge_offsets()) == [0.0, 1.0, 0.0, 1.0]
        assert spec.charge_sign == -1

    def test_uniform_half_charge_offsets(self):
        spec = LatticeSpec(4, gauss_convention=GaussConvention.UNIFORM_HALF)
        assert list(spec.charge_offsets()) == [0.5, 0.5, 0.5, 0.5]
        assert spec.charge_sign == +1

    def test_two_flavor_offsets_double(self):
        spec = LatticeSpec(4, flavors=2)
        assert list(spec.charge_offsets()) == [0.0, 2.0, 0.0, 2.0]


class TestRepresentations:
    def test_truncated_dims_and_fields(self):
        rep = TruncatedInteger(2)
        assert rep.link_dim == 5
        assert [rep.e_value(q) for q in range(5)] == [-2, -1, 0, 1, 2]

    def test_quantum_link_dims_and_fields(self):
        rep = QuantumLink(1.0)
        assert rep.link_dim == 3
        assert [rep.e_value(q) for q in range(3)] == [-1.0, 0.0, 1.0]

    def test_quantum_link_raise_elements(self):
        # S^+ matrix elements sqrt((q+1)(2S-q)) for S=1
        rep = QuantumLink(1.0)
        assert rep.raise_element(0) == pytest.approx(np.sqrt(2.0))
        assert rep.raise_element(1) == pytest.approx(np.sqrt(2.0))
        assert rep.raise_element(2) == 0.0

    def test_truncated_raise_clips_at_cutoff(self):
        rep = TruncatedInteger(1)
        assert rep.raise_element(0) == 1.0
        assert rep.raise_element(1) == 1.0
        assert rep.raise_element(2) == 0.0

    def test_schwinger_boson_matches_quantum_link_algebra(self):
        qlm = QuantumLink(1.5)
        sb = SchwingerBoson(1.5)
        assert sb.link_dim == qlm.link_dim
        for q in range(qlm.link_dim):
            assert sb.e_value(q) == pytest.approx(qlm.e_value(q))
            assert sb.raise_element(q) == pytest.approx(qlm.raise_element(q))

    def test_half_integer_spin_validation(self):
        with pytest.raises(ConfigurationError):
            QuantumLink(0.7)
        with pytest.raises(ConfigurationError):
            TruncatedInteger(0)


class TestCoulomb:
    def test_potential_symmetric_on_ring(self):
        n = 8
        for d in range(1, n):
            assert coulomb_potential(n, d) == pytest.approx(coulomb_potential(n, n - d))

    def test_matrix_is_translation_invariant(self):
        v = coulomb_matrix(6)
        for x in range(6):
            for y in range(6):
                assert v[x, y] == pytest.approx(v[(x + 1) % 6, (y + 1) % 6])

    def test_poisson_identity(self):
        # The kernel must reproduce sum_x E_x^2 for the field sourced by an
        # arbitrary neutral charge distribution: E_x = cumulative charge up
        # to x, shifted so the average field (zero mode) vanishes.
        n = 6
        rng = np.random.default_rng(3)
        rho = rng.standard_normal(n)
        rho -= rho.mean()  # neutral
        e = np.cumsum(rho)
        e -= e.mean()
        v = coulomb_matrix(n)
        assert rho @ v @ rho == pytest.approx(np.sum(e**2), rel=1e-12)


class TestCouplingSet:
    def test_defaults_are_zero_except_named(self):
        c = CouplingSet(e_l=2.0, t=1.5)
        assert c.e_l == 2.0 and c.t == 1.5
        assert c.m == 0.0 and c.gamma == 0.0 and c.u == 0.0

    def test_frozen(self):
        c = CouplingSet(e_l=1.0, t=1.0)
        with pytest.raises(AttributeError):
            c.t = 2.0
