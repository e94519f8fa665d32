"""Physical measurements: condensate, mass gap, gauge violation, profiles.

All measurements are pure functions of (state vector, basis).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import Basis
from .errors import ConfigurationError, GapUndefinedError
from .linop import DiagonalOperator, LinearOperator
from .solver import Spectrum, cluster_eigenvalues, dense_diag


@dataclass
class ObservableEntry:
    value: float
    uncertainty: float | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.uncertainty is not None and self.uncertainty < 0:
            raise ValueError("uncertainty must be non-negative")


@dataclass
class ObservableReport:
    """Named measured quantities with model/coupling descriptors."""

    entries: dict[str, ObservableEntry] = field(default_factory=dict)

    def add(self, name: str, value: float, uncertainty: float | None = None, **metadata):
        self.entries[name] = ObservableEntry(float(value), uncertainty, metadata)

    def __getitem__(self, name: str) -> ObservableEntry:
        return self.entries[name]


def _weights(state: np.ndarray) -> np.ndarray:
    return np.abs(np.asarray(state)) ** 2


def chiral_condensate(state: np.ndarray, basis: Basis) -> float:
    """chi = (1/N) sum_x (-1)^x <c^dag_x c_x - 1/2>, in units 1/a.

    Odd under one-site translation by construction; defined for one flavor.
    """
    if basis.spec.flavors != 1:
        raise ConfigurationError("the chiral condensate is a one-flavor observable")
    n = basis.spec.n_sites
    stag = (-1.0) ** np.arange(n)
    occ = basis.occupation_matrix(0) - 0.5
    return float(_weights(state) @ (occ @ stag)) / n


def condensate_from_masks(state: np.ndarray, masks: list[int], n_sites: int) -> float:
    """Condensate evaluated on an explicit bitmask basis (spin model)."""
    occ = np.zeros((len(masks), n_sites))
    for i, m in enumerate(masks):
        for x in range(n_sites):
            occ[i, x] = (m >> x) & 1
    stag = (-1.0) ** np.arange(n_sites)
    return float(_weights(state) @ ((occ - 0.5) @ stag)) / n_sites


def mass_gap(spectrum: Spectrum, cluster_tol: float = 1e-8) -> float:
    """Difference between the two lowest distinct eigenvalue clusters."""
    clusters = cluster_eigenvalues(spectrum.eigenvalues, tol=cluster_tol)
    if len(clusters) < 2:
        raise GapUndefinedError(
            "spectrum contains a single degenerate cluster; the gap is undefined"
        )
    return float(np.mean(clusters[1]) - np.mean(clusters[0]))


def gauss_violation(state: np.ndarray, generators: list[DiagonalOperator]) -> float:
    """sum_x <psi| G_x^2 |psi> >= 0; exactly zero on gauge-sector states."""
    w = _weights(state)
    return float(sum(w @ g.diagonal**2 for g in generators))


def charge_and_field_profile(state: np.ndarray, basis: Basis) -> ObservableReport:
    """Per-site <rho(x)>, per-link <E_x>, and the total charge."""
    w = _weights(state)
    rho = basis.charge_matrix()
    e = basis.link_e_matrix()
    report = ObservableReport()
    per_site = w @ rho
    per_link = w @ e
    for x in range(basis.spec.n_sites):
        report.add(f"charge_{x}", per_site[x], site=x)
        report.add(f"field_{x}", per_link[x], link=x)
    report.add("total_charge", float(per_site.sum()))
    return report


def heisenberg_reference(n_sites: int, j: float) -> Spectrum:
    """Full spectrum of J sum_x S(x).S(x+1) on a periodic ring.

    For n_sites = 2 the single bond is counted once (the two "bonds" of a
    two-site ring coincide).
    """
    if n_sites < 2 or n_sites % 2:
        raise ConfigurationError(f"n_sites must be even and >= 2, got {n_sites}")
    dim = 1 << n_sites
    bonds = [(x, (x + 1) % n_sites) for x in range(n_sites if n_sites > 2 else 1)]
    mat = np.zeros((dim, dim))
    for m in range(dim):
        for x, xp in bonds:
            sx = 0.5 if (m >> x) & 1 else -0.5
            sxp = 0.5 if (m >> xp) & 1 else -0.5
            mat[m, m] += j * sx * sxp
            if ((m >> x) & 1) != ((m >> xp) & 1):
                m2 = m ^ (1 << x) ^ (1 << xp)
                mat[m2, m] += j / 2
    return dense_diag(LinearOperator.from_matrix(mat))
