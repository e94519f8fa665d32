"""Many-body basis enumeration for fermion + link Hilbert spaces.

Basis states pair one occupation bitmask per flavor with a tuple of per-link
quantum numbers (empty for the gauge-integrated representation).  States are
lexicographically ordered on (mask_1, ..., mask_F, link values left to right),
which makes every enumeration deterministic and reproducible.

Fermionic operators act with Jordan-Wigner signs derived from a fixed mode
ordering: mode index = flavor * N + site, string counted from mode 0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, ConfigurationError
from .lattice import GaugeRep, IntegratedCoulomb, LatticeSpec

#: Hard guard on enumerated dimensions.
MAX_DIMENSION = 2**31


@dataclass(frozen=True)
class BasisState:
    """One many-body configuration: per-flavor bitmasks plus link indices."""

    occupations: tuple[int, ...]
    links: tuple[int, ...]

    def occupied(self, flavor: int, site: int) -> int:
        return (self.occupations[flavor] >> site) & 1


def jw_sign(mask: int, from_mode: int, to_mode: int) -> int:
    """Jordan-Wigner sign of c^dag_to c_from acting on a combined bitmask.

    ``mask`` must have the ``from_mode`` bit set; the ``to_mode`` bit must be
    clear after removal.  Strings are counted from mode 0.
    """
    count = (mask & ((1 << from_mode) - 1)).bit_count()
    m2 = mask ^ (1 << from_mode)
    count += (m2 & ((1 << to_mode) - 1)).bit_count()
    return -1 if count % 2 else 1


def combined_mask(occupations: Sequence[int], n_sites: int) -> int:
    """Pack per-flavor masks into a single flavor-major bitmask."""
    out = 0
    for f, m in enumerate(occupations):
        out |= m << (f * n_sites)
    return out


def _fermion_masks(n_sites: int, count: int) -> list[int]:
    return sorted(
        sum(1 << i for i in comb) for comb in itertools.combinations(range(n_sites), count)
    )


class Basis:
    """Ordered, indexable collection of BasisStates for a (spec, rep) pair."""

    def __init__(
        self,
        spec: LatticeSpec,
        rep: GaugeRep,
        states: Sequence[BasisState],
        fermion_numbers: tuple[int, ...],
        gauge_projected: bool = False,
    ):
        self.spec = spec
        self.rep = rep
        self.states = list(states)
        self.fermion_numbers = fermion_numbers
        self.gauge_projected = gauge_projected
        self._index = {s: i for i, s in enumerate(self.states)}
        self._occ_cache: dict[int, np.ndarray] = {}
        self._e_cache: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return len(self.states)

    def state(self, i: int) -> BasisState:
        return self.states[i]

    def index_of(self, state: BasisState) -> int:
        return self._index[state]

    def __contains__(self, state: BasisState) -> bool:
        return state in self._index

    def occupation_matrix(self, flavor: int = 0) -> np.ndarray:
        """(dim, N) array of site occupations for one flavor."""
        if flavor not in self._occ_cache:
            n = self.spec.n_sites
            occ = np.zeros((self.dim, n), dtype=np.float64)
            for i, s in enumerate(self.states):
                m = s.occupations[flavor]
                for x in range(n):
                    occ[i, x] = (m >> x) & 1
            self._occ_cache[flavor] = occ
        return self._occ_cache[flavor]

    def total_occupation_matrix(self) -> np.ndarray:
        out = self.occupation_matrix(0).copy()
        for f in range(1, self.spec.flavors):
            out += self.occupation_matrix(f)
        return out

    def link_e_matrix(self) -> np.ndarray:
        """(dim, N) array of electric-field eigenvalues per link."""
        if self._e_cache is None:
            if isinstance(self.rep, IntegratedCoulomb):
                self._e_cache = np.zeros((self.dim, self.spec.n_sites))
            else:
                self._e_cache = np.array(
                    [[self.rep.e_value(q) for q in s.links] for s in self.states]
                ).reshape(self.dim, self.spec.n_sites)
        return self._e_cache

    def charge_matrix(self) -> np.ndarray:
        """(dim, N) array of the convention-dependent charge density rho(x).

        rho(x) = charge_sign * (n_x - offset(x)); the Gauss generator is
        G_x = E_x - E_{x-1} + rho(x).
        """
        n_tot = self.total_occupation_matrix()
        return self.spec.charge_sign * (n_tot - self.spec.charge_offsets()[None, :])


def enumerate_basis(
    spec: LatticeSpec,
    rep: GaugeRep,
    fermion_numbers: int | Sequence[int],
) -> Basis:
    """Enumerate the fixed-fermion-number sector with all link configurations.

    ``fermion_numbers`` is one count per flavor (a bare int is promoted for
    one flavor).  Link values run over the representation's full ladder.
    """
    if isinstance(fermion_numbers, (int, np.integer)):
        fermion_numbers = (int(fermion_numbers),)
    fermion_numbers = tuple(int(k) for k in fermion_numbers)
    if len(fermion_numbers) != spec.flavors:
        raise ConfigurationError(
            f"need one fermion count per flavor ({spec.flavors}), got {fermion_numbers}",
            field="sector.fermions",
        )
    n = spec.n_sites
    for k in fermion_numbers:
        if not 0 <= k <= n:
            raise ConfigurationError(
                f"fermion count {k} outside 0..{n}", field="sector.fermions"
            )

    from math import comb

    dim = 1
    for k in fermion_numbers:
        dim *= comb(n, k)
    link_dim = rep.link_dim if not isinstance(rep, IntegratedCoulomb) else 1
    dim *= link_dim**n
    if dim > MAX_DIMENSION:
        raise CapacityError(f"basis dimension {dim} exceeds guard {MAX_DIMENSION}")

    per_flavor_masks = [_fermion_masks(n, k) for k in fermion_numbers]
    if isinstance(rep, IntegratedCoulomb):
        link_configs: Iterable[tuple[int, ...]] = [()]
    else:
        link_configs = list(itertools.product(range(rep.link_dim), repeat=n))

    states = [
        BasisState(occupations=occs, links=links)
        for occs in itertools.product(*per_flavor_masks)
        for links in link_configs
    ]
    return Basis(spec, rep, states, fermion_numbers)


def enumerate_total_basis(spec: LatticeSpec, rep: GaugeRep, total: int) -> Basis:
    """Union of all per-flavor sectors with a fixed total fermion number.

    Needed for observables that mix flavor sectors (e.g. the two-flavor
    strong-coupling manifold, where one fermion of either flavor sits on
    every site).  States stay lexicographically ordered.
    """
    if spec.flavors == 1:
        return enumerate_basis(spec, rep, total)
    n = spec.n_sites
    states: list[BasisState] = []
    for k1 in range(max(0, total - n), min(n, total) + 1):
        sub = enumerate_basis(spec, rep, (k1, total - k1))
        states.extend(sub.states)
    states.sort(key=lambda s: (s.occupations, s.links))
    if len(states) > MAX_DIMENSION:
        raise CapacityError(f"basis dimension {len(states)} exceeds guard {MAX_DIMENSION}")
    return Basis(spec, rep, states, (total,))
