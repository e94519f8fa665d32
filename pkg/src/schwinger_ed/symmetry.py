"""Discrete symmetry operators: translation, parity, charge conjugation, G-parity.

Each symmetry is a permutation-with-signs of basis states.  Fermionic signs
come from the canonical mode ordering (mode = flavor * N + site): a pure
mode permutation contributes the parity of the permutation restricted to
occupied modes; particle-hole maps (charge conjugation, G-parity) send the
vacuum to the fully occupied state (phase +1 by convention) and acquire signs
from normal-ordering the annihilation string.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .basis import Basis, BasisState
from .errors import ConfigurationError
from .lattice import GaugeRep, IntegratedCoulomb, LatticeSpec
from .linop import LinearOperator


class SymmetryKind(Enum):
    PARITY = "parity"
    CHARGE_CONJUGATION = "charge_conjugation"
    G_PARITY = "g_parity"


@dataclass(frozen=True)
class _SymmetrySpec:
    """mode_map(f, x) -> (f', x', phase); link_source(y) -> (old index, flip)."""

    mode_map: Callable[[int, int], tuple[int, int, float]]
    dagger: bool
    link_source: Callable[[int], tuple[int, bool]]


def _translation(spec: LatticeSpec) -> _SymmetrySpec:
    n = spec.n_sites
    return _SymmetrySpec(
        mode_map=lambda f, x: (f, (x + 1) % n, 1.0),
        dagger=False,
        link_source=lambda y: ((y - 1) % n, False),
    )


def _parity(spec: LatticeSpec) -> _SymmetrySpec:
    n = spec.n_sites
    return _SymmetrySpec(
        mode_map=lambda f, x: (f, (n - x) % n, float((-1) ** x)),
        dagger=False,
        link_source=lambda y: ((n - 1 - y) % n, True),
    )


def _charge_conjugation(spec: LatticeSpec) -> _SymmetrySpec:
    # c_x -> c^dag_{x+1}, E_y -> -E_{y+1}.  A constant phase (rather than
    # (-1)^x) is required for the hop -i(T - T^dag) to map onto itself:
    # the alternating phase would send T -> +T^dag and flip the hop's sign.
    n = spec.n_sites
    return _SymmetrySpec(
        mode_map=lambda f, x: (f, (x + 1) % n, 1.0),
        dagger=True,
        link_source=lambda y: ((y - 1) % n, True),
    )


def _g_parity(spec: LatticeSpec) -> _SymmetrySpec:
    if spec.flavors != 2:
        raise ConfigurationError("G-parity requires two flavors", field="lattice.flavors")
    n = spec.n_sites

    def mode_map(f: int, x: int) -> tuple[int, int, float]:
        # psi_1 -> psi_2^dag shifted; psi_2 -> -psi_1^dag shifted
        return (1 - f, (x + 1) % n, 1.0 if f == 0 else -1.0)

    return _SymmetrySpec(mode_map=mode_map, dagger=True, link_source=lambda y: ((y - 1) % n, True))


def _symmetry_spec(kind: SymmetryKind, spec: LatticeSpec) -> _SymmetrySpec:
    if kind is SymmetryKind.PARITY:
        return _parity(spec)
    if kind is SymmetryKind.CHARGE_CONJUGATION:
        return _charge_conjugation(spec)
    return _g_parity(spec)


# --------------------------------------------------------------------------
# State-level action
# --------------------------------------------------------------------------


def _occupied_modes(state: BasisState, n: int) -> list[int]:
    modes = []
    for f, mask in enumerate(state.occupations):
        m = mask
        while m:
            low = m & -m
            modes.append(f * n + low.bit_length() - 1)
            m ^= low
    return sorted(modes)


def _permutation_parity(seq: list[int]) -> int:
    """Parity sign of the permutation sorting ``seq`` ascending."""
    inversions = sum(
        1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j]
    )
    return -1 if inversions % 2 else 1


def _apply_spec_to_state(
    sym: _SymmetrySpec, state: BasisState, spec: LatticeSpec, rep: GaugeRep
) -> tuple[BasisState, float]:
    """Image basis state and amplitude (phase x fermionic sign)."""
    n = spec.n_sites
    n_modes = spec.flavors * n
    occ = _occupied_modes(state, n)
    phase = 1.0
    images = []
    for mode in occ:
        f, x = divmod(mode, n)
        f2, x2, eta = sym.mode_map(f, x)
        phase *= eta
        images.append(f2 * n + x2)

    if not sym.dagger:
        sign = _permutation_parity(images)
        new_modes = images
    else:
        # c^dag_mu -> eta c_{M(mu)} acting on the fully occupied state.
        sign = 1
        occupied = set(range(n_modes))
        for nu in reversed(images):
            below = sum(1 for s in occupied if s < nu)
            sign *= -1 if below % 2 else 1
            occupied.remove(nu)
        new_modes = sorted(occupied)

    new_masks = [0] * spec.flavors
    for mode in new_modes:
        f, x = divmod(mode, n)
        new_masks[f] |= 1 << x

    if isinstance(rep, IntegratedCoulomb):
        new_links: tuple[int, ...] = ()
    else:
        top = rep.link_dim - 1
        links = []
        for y in range(n):
            src, flip = sym.link_source(y)
            q = state.links[src]
            links.append(top - q if flip else q)
        new_links = tuple(links)

    return BasisState(tuple(new_masks), new_links), phase * sign


def translate_state(state: BasisState, spec: LatticeSpec, rep: GaugeRep) -> tuple[BasisState, float]:
    """One-site cyclic shift of a basis state, with its fermionic sign."""
    return _apply_spec_to_state(_translation(spec), state, spec, rep)


def apply_symmetry_to_state(
    kind: SymmetryKind, state: BasisState, spec: LatticeSpec, rep: GaugeRep
) -> tuple[BasisState, float]:
    """Image of a basis state under a discrete symmetry, with amplitude."""
    return _apply_spec_to_state(_symmetry_spec(kind, spec), state, spec, rep)


# --------------------------------------------------------------------------
# Operator-level action
# --------------------------------------------------------------------------


def _operator_from_spec(sym: _SymmetrySpec, basis: Basis) -> LinearOperator:
    rows, cols, vals = [], [], []
    for i, state in enumerate(basis.states):
        image, amp = _apply_spec_to_state(sym, state, basis.spec, basis.rep)
        if image not in basis:
            raise ConfigurationError(
                "symmetry does not preserve this basis sector "
                f"(state {state} maps outside the basis)"
            )
        rows.append(basis.index_of(image))
        cols.append(i)
        vals.append(amp)
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=np.complex128)
    return LinearOperator.from_matrix(mat, hermitian=False)


def translation_operator(basis: Basis) -> LinearOperator:
    """Unitary one-site translation on the given basis."""
    return _operator_from_spec(_translation(basis.spec), basis)


def discrete_symmetry(kind: SymmetryKind, basis: Basis) -> LinearOperator:
    """Unitary implementing parity, charge conjugation, or G-parity."""
    return _operator_from_spec(_symmetry_spec(kind, basis.spec), basis)


def translate_one_site(obj, basis: Basis):
    """Translate a BasisState, a state vector, or conjugate an operator.

    - BasisState -> (BasisState, sign)
    - numpy vector -> translated vector
    - LinearOperator -> T A T^dag
    """
    t = translation_operator(basis)
    if isinstance(obj, BasisState):
        return translate_state(obj, basis.spec, basis.rep)
    if isinstance(obj, np.ndarray):
        return t.apply(obj)
    if isinstance(obj, LinearOperator):
        t_mat = t._matrix
        t_dag = LinearOperator.from_matrix(t_mat.conj().T, hermitian=False)
        conjugated = t @ obj @ t_dag
        conjugated.hermitian = obj.hermitian
        return conjugated
    raise TypeError(f"cannot translate object of type {type(obj)!r}")
