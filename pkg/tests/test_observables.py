"""Observables: condensate, gap, Gauss violation, profiles, Heisenberg oracle."""
import numpy as np
import pytest

from schwinger_ed import (
    CouplingSet,
    IntegratedCoulomb,
    LatticeSpec,
    all_gauss_generators,
    build_gauge_integrated,
    build_spin_hamiltonian,
    charge_and_field_profile,
    chiral_condensate,
    dense_diag,
    enumerate_basis,
    gauss_violation,
    heisenberg_reference,
    mass_gap,
    project_gauge_sector,
)
from schwinger_ed.basis import BasisState
from schwinger_ed.errors import GapUndefinedError
from schwinger_ed.observables import ObservableReport, condensate_from_masks
from schwinger_ed.solver import Spectrum


class TestCondensate:
    def test_basis_state_value(self, basis4_int):
        # |1010> on sites 0..3: chi = (1/N) sum (-1)^x (n_x - 1/2) = 1/2
        idx = basis4_int.index_of(BasisState((0b0101,), ()))
        v = np.zeros(basis4_int.dim)
        v[idx] = 1.0
        assert chiral_condensate(v, basis4_int) == pytest.approx(0.5)
        # the translated pattern |0101> gives -1/2
        jdx = basis4_int.index_of(BasisState((0b1010,), ()))
        w = np.zeros(basis4_int.dim)
        w[jdx] = 1.0
        assert chiral_condensate(w, basis4_int) == pytest.approx(-0.5)

    def test_spin_model_agrees_with_fermion_model(self):
        spec = LatticeSpec(4)
        c = CouplingSet(e_l=1.0, t=1.0, m=0.3)
        b = enumerate_basis(spec, IntegratedCoulomb(), 2)
        gs_f = dense_diag(build_gauge_integrated(b, c)).ground_state()
        chi_f = chiral_condensate(gs_f, b)
        h_s = build_spin_hamiltonian(spec, c, total_sz=0.0)
        gs_s = dense_diag(h_s).ground_state()
        chi_s = condensate_from_masks(gs_s, h_s.masks, 4)
        assert chi_s == pytest.approx(chi_f, abs=1e-10)


class TestMassGap:
    def test_gap_skips_degenerate_ground_cluster(self):
        spec = Spectrum(eigenvalues=np.array([0.0, 1e-12, 0.7, 0.9]))
        assert mass_gap(spec) == pytest.approx(0.7)

    def test_gap_undefined_for_single_cluster(self):
        spec = Spectrum(eigenvalues=np.array([0.0, 1e-12]))
        with pytest.raises(GapUndefinedError):
            mass_gap(spec)


class TestGaussViolation:
    def test_zero_in_projected_sector(self, basis4_qlm):
        proj = project_gauge_sector(basis4_qlm, all_gauss_generators(basis4_qlm))
        v = np.zeros(proj.dim)
        v[0] = 1.0
        assert gauss_violation(v, all_gauss_generators(proj)) < 1e-14

    def test_positive_outside(self, basis4_qlm):
        v = np.zeros(basis4_qlm.dim)
        v[0] = 1.0
        gens = all_gauss_generators(basis4_qlm)
        if all(abs(g.diagonal[0]) < 1e-12 for g in gens):
            v[:] = 0
            # pick a state that violates the Gauss law somewhere
            for i in range(basis4_qlm.dim):
                if any(abs(g.diagonal[i]) > 0.5 for g in gens):
                    v[i] = 1.0
                    break
        assert gauss_violation(v, gens) > 0.1


class TestProfiles:
    def test_profile_report_shapes(self, basis4_qlm):
        v = np.zeros(basis4_qlm.dim)
        v[0] = 1.0
        report = charge_and_field_profile(v, basis4_qlm)
        assert isinstance(report, ObservableReport)
        charges = [k for k in report.entries if k.startswith("charge")]
        fields = [k for k in report.entries if k.startswith("field")]
        assert len(charges) == 4 and len(fields) == 4
        assert "total_charge" in report.entries


class TestHeisenbergReference:
    def test_n2_singlet_triplet(self):
        # two sites, one bond: E = J(S.S) with singlet -3J/4 and triplet J/4
        spec = heisenberg_reference(2, 1.0)
        assert spec.eigenvalues[0] == pytest.approx(-0.75)
        assert spec.eigenvalues[-1] == pytest.approx(0.25)

    def test_n4_ground_energy(self):
        # periodic 4-site chain: E0 = -2J
        spec = heisenberg_reference(4, 1.0)
        assert spec.eigenvalues[0] == pytest.approx(-2.0)

    def test_scales_linearly_in_j(self):
        e1 = heisenberg_reference(4, 1.0).eigenvalues
        e2 = heisenberg_reference(4, 2.0).eigenvalues
        assert np.allclose(e2, 2 * e1)
