"""Hamiltonian builders for every formulation of the lattice Schwinger model.

All builders return Hermitian :class:`~schwinger_ed.linop.LinearOperator`s
assembled as sparse matrices over a :class:`~schwinger_ed.basis.Basis`.

Hopping/Gauss pairing (forced by gauge invariance):

- ``UNIFORM_HALF`` convention: hop = -(i t/2a) c^dag_{x+1} U_x c_x + h.c.
  (U raises the link), generator G_x = E_x - E_{x-1} + (n_x - F/2).
- ``STAGGERED`` convention: hop = -(i t/2a) c^dag_{x+1} U^dag_x c_x + h.c.
  (U^dag lowers the link), generator G_x = E_x - E_{x-1} - n_x + offset.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .basis import Basis, BasisState, combined_mask, jw_sign
from .errors import ConfigurationError
from .gauss import total_gauss_square
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


@dataclass(frozen=True)
class LinkOperators:
    """Single-link matrices U = S^+, U^dag = S^-, E = S^z."""

    U: np.ndarray
    U_dagger: np.ndarray
    E: np.ndarray


def build_link_operators(spin: float) -> LinkOperators:
    """Spin-S link operators on the (2S+1)-dimensional ladder."""
    rep = QuantumLink(spin=spin)
    d = rep.link_dim
    u = np.zeros((d, d))
    for q in range(d - 1):
        u[q + 1, q] = rep.raise_element(q)
    e = np.diag([rep.e_value(q) for q in range(d)])
    return LinkOperators(U=u, U_dagger=u.T.copy(), E=e)


class _SparseAccumulator:
    """Collects COO triplets plus a diagonal, finishes to a LinearOperator."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[int] = []
        self.cols: list[int] = []
        self.vals: list[complex] = []
        self.diag = np.zeros(dim, dtype=np.float64)

    def add_pair(self, i: int, j: int, amp: complex):
        """Add <j|H|i> = amp and its Hermitian partner."""
        self.rows += [j, i]
        self.cols += [i, j]
        self.vals += [amp, np.conj(amp)]

    def finish(self) -> LinearOperator:
        mat = sp.csr_matrix(
            (self.vals, (self.rows, self.cols)),
            shape=(self.dim, self.dim),
            dtype=np.complex128,
        )
        mat = mat + sp.diags(self.diag.astype(np.complex128))
        return LinearOperator.from_matrix(mat, hermitian=True)


def _hop_within_flavor(
    basis: Basis, state: BasisState, flavor: int, x: int
) -> tuple[int, int, int] | None:
    """Move a fermion of ``flavor`` from site x to x+1 if possible.

    Returns (new per-flavor masks as tuple index info) via the combined-mask
    JW sign; None if blocked.  The caller handles the link change.
    """
    n = basis.spec.n_sites
    xp = (x + 1) % n
    mask = state.occupations[flavor]
    if not (mask >> x) & 1 or (mask >> xp) & 1:
        return None
    full = combined_mask(state.occupations, n)
    sign = jw_sign(full, flavor * n + x, flavor * n + xp)
    new_mask = mask ^ (1 << x) ^ (1 << xp)
    return new_mask, xp, sign


def _replace_flavor(occs: tuple[int, ...], flavor: int, new_mask: int) -> tuple[int, ...]:
    out = list(occs)
    out[flavor] = new_mask
    return tuple(out)


def _mass_diagonal(basis: Basis, m: float) -> np.ndarray:
    if m == 0.0:
        return np.zeros(basis.dim)
    stag = (-1.0) ** np.arange(basis.spec.n_sites)
    return m * basis.total_occupation_matrix() @ stag


def build_full_gauge_hamiltonian(
    basis: Basis, couplings: CouplingSet, link_rescale: float = 1.0
) -> LinearOperator:
    """Wilson-link / quantum-link Hamiltonian with explicit gauge fields.

    H = (e_l^2 a / 2) sum_x E_x^2
        - (i t / 2a) sum_{f,x} (c^dag_{f,x+1} U~_x c_{f,x} - h.c.)
        + m sum_x (-1)^x n_x,

    with U~ = U or U^dag per the Gauss convention.  ``link_rescale``
    multiplies the link matrix elements in the hopping term (used for the
    quantum-link-to-Wilson normalization 1/sqrt(S(S+1))).
    """
    rep = basis.rep
    if not isinstance(rep, (TruncatedInteger, QuantumLink)):
        raise ConfigurationError(
            "build_full_gauge_hamiltonian requires TruncatedInteger or "
            f"QuantumLink links, got {type(rep).__name__}"
        )
    spec = basis.spec
    n = spec.n_sites
    a = spec.lattice_spacing
    raising = spec.gauss_convention is GaussConvention.UNIFORM_HALF

    acc = _SparseAccumulator(basis.dim)
    e = basis.link_e_matrix()
    acc.diag += couplings.e_l**2 * a / 2 * np.sum(e**2, axis=1)
    acc.diag += _mass_diagonal(basis, couplings.m)

    amp0 = -1j * couplings.t / (2 * a) * link_rescale
    for i, state in enumerate(basis.states):
        for f in range(spec.flavors):
            for x in range(n):
                hop = _hop_within_flavor(basis, state, f, x)
                if hop is None:
                    continue
                new_mask, _, sign = hop
                q = state.links[x]
                if raising:
                    elem = rep.raise_element(q)
                    new_q = q + 1
                else:
                    elem = rep.raise_element(q - 1) if q >= 1 else 0.0
                    new_q = q - 1
                if elem == 0.0:
                    continue
                links = list(state.links)
                links[x] = new_q
                target = BasisState(_replace_flavor(state.occupations, f, new_mask), tuple(links))
                # On a gauge-projected basis the hop stays in-sector; a
                # missing target can only occur for sector-filtered bases.
                if target in basis:
                    acc.add_pair(i, basis.index_of(target), amp0 * sign * elem)
    return acc.finish()


def build_gauge_integrated(
    basis: Basis,
    couplings: CouplingSet,
    zero_mode: str | None = None,
    zero_mode_window: int = 4,
) -> LinearOperator:
    """Gauge-integrated (Coulomb gas) Hamiltonian on a fermion-only basis.

    H = (e_l^2 a / 2) sum_{x,y} rho(x) V(x-y) rho(y)
        - (i t / 2a) sum_{f,x} (c^dag_{f,x+1} e^{i theta} c_{f,x} - h.c.)
        + m sum_x (-1)^x n_x.

    With ``zero_mode=None`` the constant electric background is a fixed
    classical parameter (theta sector).  With ``zero_mode="rotor"`` the
    Hilbert space is extended by a rotor register eps in {-W..W} conjugate to
    the boundary Wilson line: boundary hops shift eps and the electric energy
    becomes (e_l^2 a / 2)[rho V rho + N (eps - s fbar)^2] with s the
    convention charge sign and fbar the mean of the integrated charge.  The
    extended index ordering is i * (2W+1) + (eps + W).
    """
    rep = basis.rep
    if not isinstance(rep, IntegratedCoulomb):
        raise ConfigurationError(
            "build_gauge_integrated requires the IntegratedCoulomb representation"
        )
    if zero_mode is not None and zero_mode != "rotor":
        raise ConfigurationError(f"unknown zero_mode {zero_mode!r}")
    if zero_mode == "rotor" and rep.theta != 0.0:
        raise ConfigurationError("the rotor zero mode requires theta = 0")

    spec = basis.spec
    n = spec.n_sites
    a = spec.lattice_spacing
    v = coulomb_matrix(n)
    # Charge without the global convention sign (the quadratic form is
    # sign-blind, and cumulative sums below fix signs explicitly).
    rho = basis.total_occupation_matrix() - spec.charge_offsets()[None, :]
    coulomb_diag = couplings.e_l**2 * a / 2 * np.einsum("si,ij,sj->s", rho, v, rho)
    base_diag = coulomb_diag + _mass_diagonal(basis, couplings.m)
    phase = np.exp(1j * rep.theta)
    amp0 = -1j * couplings.t / (2 * a)

    if zero_mode is None:
        acc = _SparseAccumulator(basis.dim)
        acc.diag += base_diag
        for i, state in enumerate(basis.states):
            for f in range(spec.flavors):
                for x in range(n):
                    hop = _hop_within_flavor(basis, state, f, x)
                    if hop is None:
                        continue
                    new_mask, _, sign = hop
                    target = BasisState(_replace_flavor(state.occupations, f, new_mask), ())
                    acc.add_pair(i, basis.index_of(target), amp0 * phase * sign)
        return acc.finish()

    # Rotor-extended model.
    w = zero_mode_window
    n_eps = 2 * w + 1
    dim = basis.dim * n_eps
    s = spec.charge_sign
    fbar = np.cumsum(rho, axis=1).mean(axis=1)
    eps_values = np.arange(-w, w + 1)
    acc = _SparseAccumulator(dim)
    for i in range(basis.dim):
        for k, eps in enumerate(eps_values):
            acc.diag[i * n_eps + k] = (
                base_diag[i] + couplings.e_l**2 * a * n / 2 * (eps - s * fbar[i]) ** 2
            )
    for i, state in enumerate(basis.states):
        for f in range(spec.flavors):
            for x in range(n):
                hop = _hop_within_flavor(basis, state, f, x)
                if hop is None:
                    continue
                new_mask, _, sign = hop
                target = BasisState(_replace_flavor(state.occupations, f, new_mask), ())
                j = basis.index_of(target)
                shift = s if x == n - 1 else 0
                for k, eps in enumerate(eps_values):
                    k2 = k + shift
                    if not 0 <= k2 < n_eps:
                        continue
                    acc.add_pair(i * n_eps + k, j * n_eps + k2, amp0 * sign)
    return acc.finish()


def build_spin_hamiltonian(
    spec: LatticeSpec, couplings: CouplingSet, total_sz: float | None = None, theta: float = 0.0
) -> LinearOperator:
    """Jordan-Wigner spin-1/2 chain equivalent of the one-flavor model.

    H = (t/2a) sum_x [e^{i theta} S^+(x+1) S^-(x) + h.c.]
        + (e_l^2 a / 2) sum_{x,y} rho(x) V(x-y) rho(y) + m sum (-1)^x n(x),

    with rho(x) = n(x) - offset(x) = S^3(x) + 1/2 - offset(x) per the Gauss
    convention.  The boundary bond (N-1, 0) carries the ring Jordan-Wigner
    factor (-1)^{N/2 + n_up - 1}, which makes the spectrum identical to the
    fermionic gauge-integrated model sector by sector.

    The returned operator exposes ``masks``, the ordered bitmask list of its
    basis (bit x set = spin up at x).
    """
    if spec.flavors != 1:
        raise ConfigurationError("the spin model is defined for one flavor only")
    n = spec.n_sites
    a = spec.lattice_spacing
    if total_sz is None:
        masks = list(range(1 << n))
    else:
        n_up = total_sz + n / 2
        if abs(n_up - round(n_up)) > 1e-12:
            raise ConfigurationError(f"total_sz {total_sz} invalid for N={n}")
        n_up = int(round(n_up))
        if not 0 <= n_up <= n:
            raise ConfigurationError(f"total_sz {total_sz} out of range for N={n}")
        masks = [m for m in range(1 << n) if m.bit_count() == n_up]
    index = {m: i for i, m in enumerate(masks)}
    dim = len(masks)

    v = coulomb_matrix(n)
    offs = spec.charge_offsets()
    stag = (-1.0) ** np.arange(n)
    acc = _SparseAccumulator(dim)
    occ = np.zeros((dim, n))
    for i, mask in enumerate(masks):
        for x in range(n):
            occ[i, x] = (mask >> x) & 1
    rho = occ - offs[None, :]
    acc.diag += couplings.e_l**2 * a / 2 * np.einsum("si,ij,sj->s", rho, v, rho)
    acc.diag += couplings.m * occ @ stag

    amp0 = couplings.t / (2 * a) * np.exp(1j * theta)
    for i, mask in enumerate(masks):
        n_up = mask.bit_count()
        boundary_factor = (-1.0) ** (n // 2 + n_up - 1)
        for x in range(n):
            xp = (x + 1) % n
            if (mask >> x) & 1 and not (mask >> xp) & 1:
                j = index[mask ^ (1 << x) ^ (1 << xp)]
                amp = amp0 * (boundary_factor if x == n - 1 else 1.0)
                acc.add_pair(i, j, amp)
    op = acc.finish()
    op.masks = masks
    return op


def build_schwinger_boson_model(basis: Basis, couplings: CouplingSet) -> LinearOperator:
    """Schwinger-boson link model with fixed 2S bosons per link.

    H = -t sum_{f,x} (c^dag_{f,x} b2^dag_x b1_x c_{f,x+1} + h.c.)
        + m sum_x (-1)^x n_x + (g^2/8) sum_x (n2_x - n1_x)^2.

    On the constrained link space this reproduces the quantum-link model
    with hopping t = t_QLM/2a and g^2 = e_l^2 a.
    """
    rep = basis.rep
    if not isinstance(rep, SchwingerBoson):
        raise ConfigurationError(
            "build_schwinger_boson_model requires the SchwingerBoson representation"
        )
    spec = basis.spec
    n = spec.n_sites
    two_s = rep.link_dim - 1

    acc = _SparseAccumulator(basis.dim)
    e = basis.link_e_matrix()
    acc.diag += couplings.g**2 / 8 * np.sum((2 * e) ** 2, axis=1)
    acc.diag += _mass_diagonal(basis, couplings.m)

    for i, state in enumerate(basis.states):
        full = combined_mask(state.occupations, n)
        for f in range(spec.flavors):
            mask = state.occupations[f]
            for x in range(n):
                xp = (x + 1) % n
                # c^dag_x U_x c_{x+1}: fermion xp -> x, link q_x -> q_x + 1.
                if not ((mask >> xp) & 1) or (mask >> x) & 1:
                    continue
                q = state.links[x]
                if q + 1 > two_s:
                    continue
                elem = rep.raise_element(q)
                sign = jw_sign(full, f * n + xp, f * n + x)
                links = list(state.links)
                links[x] = q + 1
                new_mask = mask ^ (1 << x) ^ (1 << xp)
                target = BasisState(
                    _replace_flavor(state.occupations, f, new_mask), tuple(links)
                )
                if target in basis:
                    acc.add_pair(i, basis.index_of(target), -couplings.t * sign * elem)
    return acc.finish()


def build_penalty_h0(basis: Basis, couplings: CouplingSet) -> LinearOperator:
    """Non-gauge-invariant microscopic Hamiltonian H0 of the penalty scheme.

    H0 = -t_f sum_x (c^dag_x c_{x+1} + h.c.)          [bare fermion hop]
         + t_b sum_x (b2^dag_x b1_x + h.c.)           [bare boson conversion]
         + sum_x v_f(x) n_x + v_b1(x) n1_x + v_b2(x) n2_x
         + u sum_x (n2_x - n1_x)^2.

    Site potentials default to the staggered pattern m (-1)^x (v_f) and zero
    (v_b) when not supplied.
    """
    rep = basis.rep
    if not isinstance(rep, SchwingerBoson):
        raise ConfigurationError(
            "the penalty model requires the SchwingerBoson representation"
        )
    spec = basis.spec
    n = spec.n_sites
    two_s = rep.link_dim - 1
    v_f = np.array(couplings.v_f) if couplings.v_f else couplings.m * (-1.0) ** np.arange(n)
    v_b1 = np.array(couplings.v_b1) if couplings.v_b1 else np.zeros(n)
    v_b2 = np.array(couplings.v_b2) if couplings.v_b2 else np.zeros(n)
    for name, arr in (("v_f", v_f), ("v_b1", v_b1), ("v_b2", v_b2)):
        if len(arr) != n:
            raise ConfigurationError(
                f"site potential {name} must have length {n}, got {len(arr)}",
                field=f"couplings.{name}",
            )

    acc = _SparseAccumulator(basis.dim)
    e = basis.link_e_matrix()
    n1 = two_s / 2 - e  # n1 = 2S - q, e = q - S
    n2 = two_s / 2 + e
    acc.diag += couplings.u * np.sum((2 * e) ** 2, axis=1)
    acc.diag += basis.total_occupation_matrix() @ v_f
    acc.diag += n1 @ v_b1 + n2 @ v_b2

    for i, state in enumerate(basis.states):
        full = combined_mask(state.occupations, n)
        for f in range(spec.flavors):
            mask = state.occupations[f]
            for x in range(n):
                xp = (x + 1) % n
                # bare fermion hop xp -> x
                if (mask >> xp) & 1 and not (mask >> x) & 1:
                    sign = jw_sign(full, f * n + xp, f * n + x)
                    new_mask = mask ^ (1 << x) ^ (1 << xp)
                    target = BasisState(
                        _replace_flavor(state.occupations, f, new_mask), state.links
                    )
                    acc.add_pair(i, basis.index_of(target), -couplings.t_f * sign)
        for x in range(n):
            # bare boson conversion q -> q + 1
            q = state.links[x]
            if q + 1 <= two_s:
                links = list(state.links)
                links[x] = q + 1
                target = BasisState(state.occupations, tuple(links))
                acc.add_pair(i, basis.index_of(target), couplings.t_b * rep.raise_element(q))
    return acc.finish()


def build_penalty_model(basis: Basis, couplings: CouplingSet) -> LinearOperator:
    """H = H0 + Gamma sum_x G_x^2 on the Schwinger-boson link space."""
    h0 = build_penalty_h0(basis, couplings)
    penalty = total_gauss_square(basis)
    scales = [abs(couplings.t_f), abs(couplings.t_b), abs(couplings.u)]
    scales += [max(map(abs, arr), default=0.0) for arr in (couplings.v_f, couplings.v_b1, couplings.v_b2)]
    if 0 < couplings.gamma < max(scales, default=0.0):
        warnings.warn(
            f"penalty strength gamma={couplings.gamma} does not exceed the other "
            "couplings; the 1/Gamma expansion is unreliable",
            stacklevel=2,
        )
    return h0 + DiagonalOperator(couplings.gamma * penalty.diagonal)
