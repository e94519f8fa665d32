"""Effective theories: projectors, perturbation theory, penalty scans."""
import numpy as np
import pytest

from schwinger_ed import (
    CouplingSet,
    LatticeSpec,
    SchwingerBoson,
    all_gauss_generators,
    build_penalty_h0,
    dense_diag,
    enumerate_basis,
)
from schwinger_ed.effective import (
    degenerate_pt2,
    effective_first_order,
    penalty_scan,
    sector_projectors,
)
from schwinger_ed.errors import DegeneracyError
from schwinger_ed.lattice import GaussConvention
from schwinger_ed.linop import DiagonalOperator, LinearOperator
from schwinger_ed.solver import SolverConfig


def _penalty_setup():
    spec = LatticeSpec(2)
    basis = enumerate_basis(spec, SchwingerBoson(0.5), 1)
    couplings = CouplingSet(
        e_l=0.0,
        t=0.0,
        t_f=1.0,
        t_b=0.6,
        u=0.2,
        v_f=(1.0, -1.0),
        v_b1=(0.1, 0.2),
        v_b2=(0.05, 0.15),
    )
    return spec, basis, couplings


class TestProjectors:
    def test_complementary_idempotent(self):
        _, basis, _ = _penalty_setup()
        gens = all_gauss_generators(basis)
        g, p = sector_projectors(basis, gens)
        dg, dp = g.diagonal, p.diagonal
        assert np.allclose(dg + dp, 1.0)
        assert np.allclose(dg * dg, dg)
        assert np.allclose(dg * dp, 0.0)


class TestFirstOrderEffective:
    def test_matches_exact_at_large_gamma(self):
        _, basis, couplings = _penalty_setup()
        gens = all_gauss_generators(basis)
        g, p = sector_projectors(basis, gens)
        h0 = build_penalty_h0(basis, couplings)
        gamma = 1e5
        h_eff = effective_first_order(h0, g, p, gens, gamma)
        from schwinger_ed import build_penalty_model
        from dataclasses import replace

        h_full = build_penalty_model(basis, replace(couplings, gamma=gamma))
        e_eff = dense_diag(h_eff).eigenvalues
        e_full = dense_diag(h_full).eigenvalues[: len(e_eff)]
        # the protected levels approach the effective ones as 1/Gamma^2
        assert np.max(np.abs(e_eff - e_full)) < 1e-3


class TestDegeneratePT2:
    def test_two_level_toy(self):
        # H0 = diag(0, 0, D); V couples the degenerate pair through the
        # excited state: standard second-order result -|v|^2/D on each
        h0 = np.array([0.0, 0.0, 5.0])
        v = np.zeros((3, 3))
        v[0, 2] = v[2, 0] = 0.3
        v[1, 2] = v[2, 1] = 0.4
        m = degenerate_pt2(
            DiagonalOperator(h0), LinearOperator.from_matrix(v), manifold=[0, 1]
        )
        expected = -np.array([[0.09, 0.12], [0.12, 0.16]]) / 5.0
        assert np.allclose(m.to_matrix(), expected)

    def test_rejects_split_manifold(self):
        h0 = np.array([0.0, 0.1, 5.0])
        v = np.zeros((3, 3))
        with pytest.raises(DegeneracyError):
            degenerate_pt2(
                DiagonalOperator(h0), LinearOperator.from_matrix(v), manifold=[0, 1]
            )


class TestPenaltyScan:
    def test_slopes_and_ratios(self):
        _, basis, couplings = _penalty_setup()
        report = penalty_scan(
            basis,
            couplings,
            gamma_list=[20.0, 40.0, 80.0, 160.0],
            n_eigenvalues=3,
            solver_config=SolverConfig(k=3, tol=1e-11),
        )
        assert len(report.rows) == 4
        # energy error ~ 1/Gamma, violation ~ 1/Gamma^2
        assert report.energy_error_slope == pytest.approx(-1.0, abs=0.2)
        assert report.violation_slope == pytest.approx(-2.0, abs=0.3)
        assert report.effective_error_doubling_ratios
        for ratio in report.effective_error_doubling_ratios:
            assert 3.5 <= ratio <= 4.5
