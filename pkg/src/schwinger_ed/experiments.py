"""Experiment tasks: build -> solve -> measure -> machine-readable report.

Each task takes a normalized configuration (see :mod:`schwinger_ed.config`)
and returns an :class:`ExperimentResult` holding a CSV body and a summary
mapping.  Sweep points run concurrently up to a worker count; report assembly
is sequential, so outputs are byte-identical across reruns.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Callable

import numpy as np

from .basis import Basis, enumerate_basis, enumerate_total_basis
from .config import format_config
from .effective import degenerate_pt2, penalty_scan
from .errors import ConfigurationError
from .fitting import FitModel, extrapolate
from .gauss import all_gauss_generators
from .lattice import (
    CouplingSet,
    GaussConvention,
    IntegratedCoulomb,
    LatticeSpec,
    QuantumLink,
    SchwingerBoson,
    TruncatedInteger,
    coulomb_matrix,
)
from .linop import DiagonalOperator, LinearOperator
from .models import (
    build_full_gauge_hamiltonian,
    build_gauge_integrated,
    build_penalty_model,
    build_schwinger_boson_model,
    build_spin_hamiltonian,
)
from .observables import chiral_condensate, condensate_from_masks, mass_gap
from .solver import SolverConfig, Spectrum, cluster_eigenvalues, dense_diag, lanczos_lowest


@dataclass
class ExperimentResult:
    task: str
    csv_header: list[str]
    csv_rows: list[list[Any]]
    summary: dict[str, Any]
    config_echo: str

    @property
    def csv_text(self) -> str:
        lines = [",".join(self.csv_header)]
        for row in self.csv_rows:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


# --------------------------------------------------------------------------
# Config-to-object helpers
# --------------------------------------------------------------------------


def _spec_from(config: dict, n_sites: int | None = None) -> LatticeSpec:
    return LatticeSpec(
        n_sites=n_sites if n_sites is not None else config["lattice.n_sites"],
        lattice_spacing=config["lattice.spacing"],
        flavors=config["lattice.flavors"],
        gauss_convention=GaussConvention(config["lattice.gauss_convention"]),
    )


def _rep_from(config: dict):
    kind = config["gauge.kind"]
    if kind == "integrated":
        return IntegratedCoulomb(theta=config["gauge.theta"])
    if kind == "truncated_integer":
        return TruncatedInteger(cutoff=config["gauge.cutoff"])
    if kind == "quantum_link":
        return QuantumLink(spin=config["gauge.spin"])
    return SchwingerBoson(spin=config["gauge.spin"])


def _couplings_from(config: dict) -> CouplingSet:
    return CouplingSet(
        e_l=config["couplings.e_l"],
        t=config["couplings.t"],
        m=config["couplings.m"],
        t_f=config["couplings.t_f"],
        t_b=config["couplings.t_b"],
        u=config["couplings.u"],
        gamma=config["couplings.gamma"],
        g=config["couplings.g"],
        v_f=tuple(config["couplings.v_f"]),
        v_b1=tuple(config["couplings.v_b1"]),
        v_b2=tuple(config["couplings.v_b2"]),
    )


def _solver_from(config: dict, k: int | None = None) -> SolverConfig:
    return SolverConfig(
        k=k if k is not None else config["solver.k"],
        tol=config["solver.tol"],
        max_iter=config["solver.max_iter"],
        seed=config["solver.seed"],
    )


def _fermion_numbers(config: dict, spec: LatticeSpec) -> tuple[int, ...]:
    sector = config["sector.fermions"]
    if sector:
        if len(sector) != spec.flavors:
            raise ConfigurationError(
                f"sector.fermions needs {spec.flavors} entries, got {len(sector)}",
                field="sector.fermions",
            )
        return tuple(sector)
    return tuple([spec.n_sites // 2] * spec.flavors)


def _build_model(config: dict, n_sites: int | None = None, m_override: float | None = None):
    """Build the configured model; returns (operator, basis-or-masks info)."""
    spec = _spec_from(config, n_sites)
    couplings = _couplings_from(config)
    if m_override is not None:
        couplings = replace(couplings, m=m_override)
    kind = config["model.kind"]
    if kind == "spin":
        total_sz = 0.0
        sector = config["sector.fermions"]
        if sector:
            total_sz = sector[0] - spec.n_sites / 2
        op = build_spin_hamiltonian(spec, couplings, total_sz=total_sz, theta=config["gauge.theta"])
        return op, None
    if kind == "integrated":
        basis = enumerate_basis(spec, IntegratedCoulomb(theta=config["gauge.theta"]), _fermion_numbers(config, spec))
        zero_mode = None if config["model.zero_mode"] == "none" else config["model.zero_mode"]
        op = build_gauge_integrated(
            basis, couplings, zero_mode=zero_mode, zero_mode_window=config["model.zero_mode_window"]
        )
        return op, basis
    rep = _rep_from(config)
    basis = enumerate_basis(spec, rep, _fermion_numbers(config, spec))
    if kind == "full":
        return build_full_gauge_hamiltonian(basis, couplings, link_rescale=config["model.link_rescale"]), basis
    if kind == "schwinger_boson":
        return build_schwinger_boson_model(basis, couplings), basis
    return build_penalty_model(basis, couplings), basis


def _solve(op: LinearOperator, cfg: SolverConfig) -> Spectrum:
    k = min(cfg.k, op.dim)
    # Dense is cheaper only for small blocks; Lanczos wins well before the
    # dense oracle's 4096 cap when only a few pairs are needed.
    if op.dim <= 400 and op._matrix is not None:
        spec = dense_diag(op)
        return Spectrum(
            eigenvalues=spec.eigenvalues[:k],
            eigenvectors=spec.eigenvectors[:, :k],
            residual_norms=spec.residual_norms[:k],
        )
    return lanczos_lowest(op, replace(cfg, k=k))


def _map_points(fn: Callable, points: list, workers: int) -> list:
    if workers <= 1 or len(points) <= 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))


# --------------------------------------------------------------------------
# Tasks
# --------------------------------------------------------------------------


def run_spectrum(config: dict, workers: int = 1) -> ExperimentResult:
    """Lowest-k eigenvalues of the configured model."""
    op, _ = _build_model(config)
    spec = _solve(op, _solver_from(config))
    rows = [
        [i, float(spec.eigenvalues[i]), float(spec.residual_norms[i])]
        for i in range(len(spec.eigenvalues))
    ]
    summary = {
        "dimension": op.dim,
        "ground_energy": float(spec.eigenvalues[0]),
    }
    return ExperimentResult("spectrum", ["index", "eigenvalue", "residual_norm"], rows, summary, format_config(config))


def run_gap(config: dict, workers: int = 1) -> ExperimentResult:
    """Degeneracy-aware gap per lattice size plus a linear 1/N extrapolation."""
    sizes = config["gap.sizes"]
    cfg = _solver_from(config, k=config["gap.k"])

    def point(n: int):
        op, _ = _build_model(config, n_sites=n)
        spec = _solve(op, cfg)
        return mass_gap(spec, cluster_tol=config["gap.cluster_tol"]), float(spec.eigenvalues[0])

    results = _map_points(point, sizes, workers)
    rows = [[n, g, e0] for n, (g, e0) in zip(sizes, results)]
    fit = extrapolate([(1.0 / n, g) for n, (g, _) in zip(sizes, results)], FitModel.LINEAR_IN_INVERSE_N)
    summary = {
        "gap_intercept": fit.intercept,
        "gap_intercept_error": fit.parameter_errors[0],
        "fit_residual_norm": fit.residual_norm,
    }
    return ExperimentResult("gap", ["n_sites", "gap", "ground_energy"], rows, summary, format_config(config))


def run_condensate(config: dict, workers: int = 1) -> ExperimentResult:
    """Chiral condensate: m -> 0 extrapolation per size, then 1/N -> 0."""
    sizes = config["condensate.sizes"]
    masses = config["condensate.masses"]
    cfg = _solver_from(config, k=1)

    def point(arg):
        n, m = arg
        op, basis = _build_model(config, n_sites=n, m_override=m)
        spec = _solve(op, cfg)
        state = spec.ground_state()
        if basis is not None:
            chi = chiral_condensate(state, basis)
        else:
            chi = condensate_from_masks(state, op.masks, n)
        return chi

    points = [(n, m) for n in sizes for m in masses]
    chis = _map_points(point, points, workers)
    rows = [[n, m, chi] for (n, m), chi in zip(points, chis)]
    summary: dict[str, Any] = {}
    per_size = []
    for n in sizes:
        vals = [chi for (nn, m), chi in zip(points, chis) if nn == n]
        fit = extrapolate(list(zip(masses, vals)), FitModel.LINEAR_IN_MASS)
        per_size.append(fit.intercept)
        summary[f"chi_m0_n{n}"] = fit.intercept
    fit_n = extrapolate([(1.0 / n, c) for n, c in zip(sizes, per_size)], FitModel.LINEAR_IN_INVERSE_N)
    summary["chi_extrapolated"] = fit_n.intercept
    summary["chi_extrapolated_error"] = fit_n.parameter_errors[0]
    return ExperimentResult("condensate", ["n_sites", "mass", "condensate"], rows, summary, format_config(config))


def run_penalty_scan(config: dict, workers: int = 1) -> ExperimentResult:
    """Penalty-strength scan with fitted error/violation exponents."""
    spec = _spec_from(config)
    rep = SchwingerBoson(spin=config["gauge.spin"])
    basis = enumerate_basis(spec, rep, _fermion_numbers(config, spec))
    report = penalty_scan(
        basis,
        _couplings_from(config),
        config["penalty.gammas"],
        solver_config=_solver_from(config, k=4),
    )
    rows = [
        [r.gamma, float(r.full_eigenvalues[0]), float(r.sector_eigenvalues[0]),
         float(r.effective_eigenvalues[0]), r.violation]
        for r in report.rows
    ]
    summary = {
        "energy_error_slope": report.energy_error_slope,
        "violation_slope": report.violation_slope,
    }
    for i, ratio in enumerate(report.effective_error_doubling_ratios):
        summary[f"effective_error_doubling_ratio_{i}"] = ratio
    return ExperimentResult(
        "penalty-scan",
        ["gamma", "e0_full", "e0_sector", "e0_effective", "violation"],
        rows,
        summary,
        format_config(config),
    )


def run_qlm_scan(config: dict, workers: int = 1) -> ExperimentResult:
    """Quantum-link truncation scan against a Wilson-link reference."""
    s_list = config["qlm.s_list"]
    cutoff = config["qlm.reference_cutoff"]
    if s_list != sorted(s_list):
        raise ConfigurationError("qlm.s_list must be ascending", field="qlm.s_list")
    if cutoff < max(s_list):
        raise ConfigurationError(
            "qlm.reference_cutoff must be >= max(qlm.s_list)", field="qlm.reference_cutoff"
        )
    spec = _spec_from(config)
    couplings = _couplings_from(config)
    cfg = _solver_from(config, k=1)
    numbers = _fermion_numbers(config, spec)

    ref_basis = enumerate_basis(spec, TruncatedInteger(cutoff=cutoff), numbers)
    ref_op = build_full_gauge_hamiltonian(ref_basis, couplings)
    ref_e0 = float(_solve(ref_op, cfg).eigenvalues[0])

    def point(s: float):
        basis = enumerate_basis(spec, QuantumLink(spin=s), numbers)
        rescale = 1.0 / np.sqrt(s * (s + 1)) if config["qlm.rescale"] else 1.0
        op = build_full_gauge_hamiltonian(basis, couplings, link_rescale=rescale)
        return float(_solve(op, cfg).eigenvalues[0])

    e0s = _map_points(point, s_list, workers)
    devs = [abs(e - ref_e0) for e in e0s]
    rows = [[s, e, d] for s, e, d in zip(s_list, e0s, devs)]
    summary = {
        "reference_cutoff": cutoff,
        "reference_e0": ref_e0,
        "monotone_decreasing": bool(all(devs[i + 1] < devs[i] for i in range(len(devs) - 1))),
    }
    return ExperimentResult(
        "qlm-scan", ["spin", "e0", "deviation"], rows, summary, format_config(config)
    )


def strong_coupling_effective(spec: LatticeSpec, couplings: CouplingSet):
    """Second-order strong-coupling reduction of the two-flavor model.

    Returns (J, const, max element deviation from J sum S.S + const, basis).
    The manifold is one fermion of either flavor per site; the effective
    operator is compared in the site-ordered spin product basis, reached from
    the flavor-major fermion basis by a permutation-parity sign.
    """
    if spec.flavors != 2:
        raise ConfigurationError("the strong-coupling reduction requires two flavors")
    n = spec.n_sites
    rep = IntegratedCoulomb()
    basis = enumerate_total_basis(spec, rep, n)
    v = coulomb_matrix(n)
    rho = basis.total_occupation_matrix() - spec.charge_offsets()[None, :]
    a = spec.lattice_spacing
    coulomb = DiagonalOperator(
        couplings.e_l**2 * a / 2 * np.einsum("si,ij,sj->s", rho, v, rho)
    )
    hop = build_gauge_integrated(basis, replace(couplings, e_l=0.0, m=0.0))

    manifold = np.array(
        [
            i
            for i, s in enumerate(basis.states)
            if (s.occupations[0] | s.occupations[1]) == (1 << n) - 1
            and (s.occupations[0] & s.occupations[1]) == 0
        ]
    )
    m_eff = degenerate_pt2(coulomb, hop, manifold).to_matrix().real

    # Flavor-major -> site-ordered product basis: permutation parity per state.
    patterns = [basis.states[i].occupations[0] for i in manifold]
    signs = np.array([_pattern_sign(p, n) for p in patterns], dtype=float)
    m_eff = signs[:, None] * m_eff * signs[None, :]

    # Explicit Heisenberg matrix on the spin patterns (up = flavor 1).
    pidx = {p: i for i, p in enumerate(patterns)}
    dim = len(patterns)
    heis = np.zeros((dim, dim))
    bonds = [(x, (x + 1) % n) for x in range(n if n > 2 else 1)]
    for i, p in enumerate(patterns):
        for x, xp in bonds:
            sx = 0.5 if (p >> x) & 1 else -0.5
            sxp = 0.5 if (p >> xp) & 1 else -0.5
            heis[i, i] += sx * sxp
            if ((p >> x) & 1) != ((p >> xp) & 1):
                heis[pidx[p ^ (1 << x) ^ (1 << xp)], i] += 0.5
    design = np.column_stack([heis.ravel(), np.eye(dim).ravel()])
    coef, *_ = np.linalg.lstsq(design, m_eff.ravel(), rcond=None)
    j_coupling, const = float(coef[0]), float(coef[1])
    deviation = float(np.max(np.abs(m_eff - (j_coupling * heis + const * np.eye(dim)))))
    return j_coupling, const, deviation, heis, basis


def run_strong_coupling(config: dict, workers: int = 1) -> ExperimentResult:
    """Two-flavor strong-coupling limit versus the Heisenberg ring."""
    spec = _spec_from(config)
    if spec.flavors != 2:
        raise ConfigurationError(
            "strong-coupling task requires lattice.flavors = 2", field="lattice.flavors"
        )
    couplings = _couplings_from(config)
    j_unit, const, deviation, heis, basis = strong_coupling_effective(spec, couplings)
    heis_levels = np.unique(np.round(np.linalg.eigvalsh(heis), 9))

    def point(t: float):
        op = build_gauge_integrated(basis, replace(couplings, t=t, m=0.0))
        spec_t = dense_diag(op) if op.dim <= 4096 else lanczos_lowest(
            op, _solver_from(config, k=8)
        )
        levels = np.unique(np.round(spec_t.eigenvalues, 9))
        j_t = j_unit * (t / couplings.t) ** 2
        full_gaps = (levels[:3] - levels[0]).tolist()
        heis_gaps = (j_t * (heis_levels[:3] - heis_levels[0])).tolist()
        return full_gaps, heis_gaps

    t_values = config["strong.t_values"]
    results = _map_points(point, t_values, workers)
    rows = []
    for t, (fg, hg) in zip(t_values, results):
        for level, (f, h) in enumerate(zip(fg, hg)):
            rows.append([t, level, f, h])
    summary = {
        "heisenberg_j_per_t2": j_unit / couplings.t**2,
        "effective_constant": const,
        "max_element_deviation": deviation,
    }
    return ExperimentResult(
        "strong-coupling",
        ["t", "level", "full_gap", "heisenberg_gap"],
        rows,
        summary,
        format_config(config),
    )


def _pattern_sign(pattern: int, n: int) -> int:
    """Parity mapping flavor-major ordering to site ordering for one-per-site
    states; ``pattern`` marks the sites occupied by flavor 1."""
    inversions = 0
    for x in range(n):
        if (pattern >> x) & 1:
            inversions += sum(1 for y in range(x) if not (pattern >> y) & 1)
    return -1 if inversions % 2 else 1


TASKS: dict[str, Callable[[dict, int], ExperimentResult]] = {
    "spectrum": run_spectrum,
    "gap": run_gap,
    "condensate": run_condensate,
    "penalty-scan": run_penalty_scan,
    "qlm-scan": run_qlm_scan,
    "strong-coupling": run_strong_coupling,
}


def run_task(task: str, config: dict, workers: int = 1) -> ExperimentResult:
    if task not in TASKS:
        raise ConfigurationError(f"unknown task {task!r}", field="task")
    return TASKS[task](config, workers)
