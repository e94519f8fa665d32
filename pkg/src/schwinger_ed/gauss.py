"""Gauss-law generators and gauge-sector projection.

All generators are diagonal in the occupation/link basis:
G_x = E_x - E_{x-1} + rho(x) with rho(x) the convention-dependent charge
density (see :mod:`schwinger_ed.lattice`).
"""
from __future__ import annotations

import numpy as np

from .basis import Basis
from .errors import UnsupportedRepresentationError
from .lattice import IntegratedCoulomb
from .linop import DiagonalOperator


def gauss_generator(x: int, basis: Basis) -> DiagonalOperator:
    """Diagonal operator G_x on the given basis."""
    if isinstance(basis.rep, IntegratedCoulomb):
        raise UnsupportedRepresentationError(
            "Gauss generators require link degrees of freedom; "
            "the gauge-integrated representation has none"
        )
    n = basis.spec.n_sites
    x = x % n
    e = basis.link_e_matrix()
    rho = basis.charge_matrix()
    return DiagonalOperator(e[:, x] - e[:, (x - 1) % n] + rho[:, x])


def all_gauss_generators(basis: Basis) -> list[DiagonalOperator]:
    return [gauss_generator(x, basis) for x in range(basis.spec.n_sites)]


def total_gauss_square(basis: Basis) -> DiagonalOperator:
    """Diagonal operator sum_x G_x**2 (the penalty term at unit strength)."""
    gens = all_gauss_generators(basis)
    return DiagonalOperator(sum(g.diagonal**2 for g in gens))


def project_gauge_sector(basis: Basis, generators: list[DiagonalOperator], tol: float = 1e-9) -> Basis:
    """Sub-basis annihilated by every generator; preserves ordering.

    An empty result is legal and returned as a zero-dimensional Basis.
    """
    keep = np.ones(basis.dim, dtype=bool)
    for g in generators:
        keep &= np.abs(g.diagonal) < tol
    states = [s for s, k in zip(basis.states, keep) if k]
    return Basis(
        basis.spec,
        basis.rep,
        states,
        basis.fermion_numbers,
        gauge_projected=True,
    )
