"""Gauss-law generators and gauge-sector projection."""
import numpy as np
import pytest

from schwinger_ed import (
    CouplingSet,
    IntegratedCoulomb,
    LatticeSpec,
    QuantumLink,
    TruncatedInteger,
    all_gauss_generators,
    build_full_gauge_hamiltonian,
    enumerate_basis,
    gauss_generator,
    project_gauge_sector,
    total_gauss_square,
)
from schwinger_ed.errors import UnsupportedRepresentationError
from schwinger_ed.lattice import GaussConvention
from schwinger_ed.linop import commutator_defect, random_state


class TestGenerators:
    def test_generators_are_diagonal_and_real(self, basis4_trunc):
        for g in all_gauss_generators(basis4_trunc):
            assert g.dim == basis4_trunc.dim
            assert np.all(np.isreal(g.diagonal))

    def test_generator_values_on_known_state(self):
        # Uniform state: no fermions moved, all links at E=0; staggered
        # convention gives G_x = -(n_x - offset(x)).
        spec = LatticeSpec(4)
        b = enumerate_basis(spec, TruncatedInteger(1), 2)
        g0 = gauss_generator(0, b)
        for i, s in enumerate(b.states):
            if all(spec.charge_sign * 0 == 0 for _ in s.links) and s.links == (1, 1, 1, 1):
                n0 = (s.occupations[0] >> 0) & 1
                assert g0.diagonal[i] == pytest.approx(-(n0 - 0.0))

    def test_integrated_rep_rejected(self, basis4_int):
        with pytest.raises(UnsupportedRepresentationError):
            gauss_generator(0, basis4_int)

    def test_total_gauss_square_nonnegative(self, basis4_qlm):
        sq = total_gauss_square(basis4_qlm)
        assert np.all(sq.diagonal >= -1e-15)


class TestProjection:
    def test_projected_states_annihilated(self, basis4_trunc):
        proj = project_gauge_sector(basis4_trunc, all_gauss_generators(basis4_trunc))
        assert 0 < proj.dim < basis4_trunc.dim
        gens = all_gauss_generators(proj)
        for g in gens:
            assert np.max(np.abs(g.diagonal)) < 1e-12

    def test_projection_idempotent(self, basis4_trunc):
        p1 = project_gauge_sector(basis4_trunc, all_gauss_generators(basis4_trunc))
        p2 = project_gauge_sector(p1, all_gauss_generators(p1))
        assert p2.dim == p1.dim

    def test_empty_sector_is_legal(self):
        # Uniform-half charges are half-integer at half filling: no integer
        # link configuration satisfies the Gauss law, so the sector is empty.
        spec = LatticeSpec(4, gauss_convention=GaussConvention.UNIFORM_HALF)
        b = enumerate_basis(spec, TruncatedInteger(1), 2)
        proj = project_gauge_sector(b, all_gauss_generators(b))
        assert proj.dim == 0
        h = build_full_gauge_hamiltonian(proj, CouplingSet(e_l=1.0, t=1.0))
        assert h.dim == 0


class TestGaugeInvariance:
    @pytest.mark.parametrize("convention", list(GaussConvention))
    def test_hamiltonian_commutes_with_generators(self, convention):
        spec = LatticeSpec(4, gauss_convention=convention)
        b = enumerate_basis(spec, QuantumLink(1.0), 2)
        h = build_full_gauge_hamiltonian(b, CouplingSet(e_l=1.0, t=1.0, m=0.5))
        for x in range(4):
            g = gauss_generator(x, b)
            assert commutator_defect(h, g, trials=5) < 1e-12

    def test_gauge_sector_preserved_under_evolution_proxy(self, basis4_qlm):
        # H maps the physical sector into itself: applying H to a projected
        # state leaves total G^2 expectation at zero.
        proj = project_gauge_sector(basis4_qlm, all_gauss_generators(basis4_qlm))
        h = build_full_gauge_hamiltonian(proj, CouplingSet(e_l=1.0, t=1.0))
        v = random_state(proj.dim, seed=2)
        w = h.apply(v)
        sq = total_gauss_square(proj)
        assert abs(np.vdot(w, sq.apply(w))) < 1e-12
