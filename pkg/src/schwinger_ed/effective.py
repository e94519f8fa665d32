"""Gauge-protection machinery: sector projectors, effective Hamiltonians,
penalty-strength scans, and degenerate second-order perturbation theory.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .basis import Basis
from .errors import DegeneracyError, EmptySectorError
from .gauss import all_gauss_generators
from .lattice import CouplingSet
from .linop import DiagonalOperator, LinearOperator
from .models import build_penalty_h0, build_penalty_model
from .observables import gauss_violation
from .solver import SolverConfig, Spectrum, dense_diag, lanczos_lowest


def sector_projectors(
    basis: Basis, generators: list[DiagonalOperator], tol: float = 1e-9
) -> tuple[DiagonalOperator, DiagonalOperator]:
    """(G, P): diagonal 0/1 projectors onto the gauge sector and complement."""
    in_sector = np.ones(basis.dim, dtype=bool)
    for g in generators:
        in_sector &= np.abs(g.diagonal) < tol
    g_proj = DiagonalOperator(in_sector.astype(float))
    p_proj = DiagonalOperator(1.0 - in_sector.astype(float))
    return g_proj, p_proj


def effective_first_order(
    h0: LinearOperator,
    g_proj: DiagonalOperator,
    p_proj: DiagonalOperator,
    generators: list[DiagonalOperator],
    gamma: float,
) -> LinearOperator:
    """First-order effective Hamiltonian on the gauge sector.

    H_eff = G H0 G - (1/gamma) G H0 P (sum_x G_x^2)^{-1} P H0 G,
    with the resolvent inverted exactly on the diagonal penalty values of the
    complement.  Returned restricted to the sector (dimension = rank G); the
    operator exposes ``sector_indices`` into the parent basis.
    """
    sector = np.where(g_proj.diagonal > 0.5)[0]
    if sector.size == 0:
        raise EmptySectorError("the gauge sector is empty")
    comp = np.where(p_proj.diagonal > 0.5)[0]
    h = h0.to_matrix()
    h_gg = h[np.ix_(sector, sector)]
    if comp.size and gamma != np.inf:
        penalty = sum(g.diagonal**2 for g in generators)[comp]
        h_gp = h[np.ix_(sector, comp)]
        h_gg = h_gg - (1.0 / gamma) * h_gp @ np.diag(1.0 / penalty) @ h_gp.conj().T
    op = LinearOperator.from_matrix(h_gg, hermitian=True)
    op.sector_indices = sector
    return op


def degenerate_pt2(
    h_unperturbed: DiagonalOperator,
    v: LinearOperator,
    manifold: np.ndarray,
    isolation_tol: float = 1e-8,
) -> LinearOperator:
    """Second-order effective operator on a degenerate manifold.

    M_eff = Q V Q + Q V Q' (E0 - H_u)^{-1} Q' V Q, with Q the manifold
    projector and Q' its complement.  The manifold must span an exact
    eigenspace of the diagonal H_u and be spectrally isolated.
    """
    manifold = np.asarray(manifold, dtype=int)
    diag = h_unperturbed.diagonal
    e0 = diag[manifold[0]]
    if np.max(np.abs(diag[manifold] - e0)) > isolation_tol:
        raise DegeneracyError("manifold states are not degenerate under H_unperturbed")
    comp = np.setdiff1d(np.arange(h_unperturbed.dim), manifold)
    vm = v.to_matrix()
    m_eff = vm[np.ix_(manifold, manifold)].copy()
    if comp.size:
        denom = diag[comp] - e0
        if np.min(np.abs(denom)) < isolation_tol:
            raise DegeneracyError(
                "manifold is not spectrally isolated: vanishing denominator"
            )
        v_qp = vm[np.ix_(manifold, comp)]
        m_eff -= v_qp @ np.diag(1.0 / denom) @ v_qp.conj().T
    op = LinearOperator.from_matrix(m_eff, hermitian=True)
    op.manifold_indices = manifold
    return op


@dataclass
class PenaltyScanRow:
    gamma: float
    full_eigenvalues: np.ndarray
    sector_eigenvalues: np.ndarray
    effective_eigenvalues: np.ndarray
    violation: float


@dataclass
class PenaltyScanReport:
    rows: list[PenaltyScanRow]
    energy_error_slope: float | None
    violation_slope: float | None
    effective_error_doubling_ratios: list[float]


def _lowest(op: LinearOperator, k: int, cfg: SolverConfig) -> Spectrum:
    if op.dim <= 4096:
        return dense_diag(op)
    return lanczos_lowest(op, replace(cfg, k=k))


def _loglog_slope(x: np.ndarray, y: np.ndarray) -> float | None:
    if np.any(np.asarray(y) <= 0):
        return None
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def penalty_scan(
    basis: Basis,
    couplings: CouplingSet,
    gamma_list: list[float],
    n_eigenvalues: int = 4,
    solver_config: SolverConfig | None = None,
) -> PenaltyScanReport:
    """Scan the penalty strength and fit the 1/Gamma error scalings.

    For each Gamma: lowest eigenvalues of H0 + Gamma sum G_x^2, of the
    projected G H0 G, and of the first-order effective Hamiltonian; plus the
    ground-state gauge violation.  Log-log slopes are fitted for the raw
    energy error |E0(full) - E0(GH0G)| and the violation; the first-order
    corrected error |E0(full) - E0(H_eff)| is reported through its
    Gamma-doubling ratios.
    """
    if len(gamma_list) < 3 or sorted(gamma_list) != list(gamma_list):
        raise ValueError("gamma_list must be ascending with at least 3 points")
    cfg = solver_config or SolverConfig(k=n_eigenvalues)
    generators = all_gauss_generators(basis)
    g_proj, p_proj = sector_projectors(basis, generators)
    h0 = build_penalty_h0(basis, couplings)
    sector = np.where(g_proj.diagonal > 0.5)[0]
    if sector.size == 0:
        raise EmptySectorError("the gauge sector is empty")
    h0_mat = h0.to_matrix()
    sector_spec = dense_diag(
        LinearOperator.from_matrix(h0_mat[np.ix_(sector, sector)], hermitian=True)
    )
    rows = []
    for gamma in gamma_list:
        full = build_penalty_model(basis, replace(couplings, gamma=float(gamma)))
        spec = _lowest(full, n_eigenvalues, cfg)
        h_eff = effective_first_order(h0, g_proj, p_proj, generators, gamma)
        eff_spec = dense_diag(h_eff)
        rows.append(
            PenaltyScanRow(
                gamma=float(gamma),
                full_eigenvalues=spec.eigenvalues[:n_eigenvalues],
                sector_eigenvalues=sector_spec.eigenvalues[:n_eigenvalues],
                effective_eigenvalues=eff_spec.eigenvalues[:n_eigenvalues],
                violation=gauss_violation(spec.ground_state(), generators),
            )
        )
    gammas = np.array([r.gamma for r in rows])
    energy_errors = np.array(
        [abs(r.full_eigenvalues[0] - r.sector_eigenvalues[0]) for r in rows]
    )
    violations = np.array([r.violation for r in rows])
    eff_errors = [abs(r.full_eigenvalues[0] - r.effective_eigenvalues[0]) for r in rows]
    ratios = [
        eff_errors[i] / eff_errors[i + 1]
        for i in range(len(rows) - 1)
        if eff_errors[i + 1] > 0 and abs(rows[i + 1].gamma - 2 * rows[i].gamma) < 1e-9
    ]
    return PenaltyScanReport(
        rows=rows,
        energy_error_slope=_loglog_slope(gammas, energy_errors),
        violation_slope=_loglog_slope(gammas, violations),
        effective_error_doubling_ratios=ratios,
    )
