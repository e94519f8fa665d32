"""Lattice geometry, gauge-field representations, couplings, Coulomb kernel.

Conventions
-----------
Sites are indexed 0..N-1 with ``(-1)**x`` defined from x=0 even; link x lives
between sites x and x+1 (mod N); boundaries are periodic.  The lattice spacing
``a`` multiplies couplings explicitly, but all defaults set a=1 so energies
come out in units of t/a.

Two Gauss-law conventions are supported.  They differ by a background-charge
relabeling and fix the sign with which the fermion density enters the local
generator G_x, as well as which link raising/lowering operator the hopping
term carries (the pairing is forced by gauge invariance):

``UNIFORM_HALF``
    G_x = E_x - E_{x-1} + (n_x - F/2); hopping ~ c^dag_{x+1} U_x c_x.
``STAGGERED``
    G_x = E_x - E_{x-1} - (n_x - F(1-(-1)^x)/2); hopping ~ c^dag_{x+1} U^dag_x c_x.

Here n_x is the total fermion number at site x and F the flavor count.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from .errors import ConfigurationError


class GaussConvention(Enum):
    """Sign/offset convention of the Gauss-law generators."""

    UNIFORM_HALF = "uniform_half"
    STAGGERED = "staggered"


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry and convention choices of a periodic staggered-fermion chain."""

    n_sites: int
    lattice_spacing: float = 1.0
    flavors: int = 1
    gauss_convention: GaussConvention = GaussConvention.STAGGERED

    def __post_init__(self):
        if self.n_sites < 2 or self.n_sites % 2 != 0:
            raise ConfigurationError(
                f"n_sites must be a positive even integer, got {self.n_sites}",
                field="lattice.n_sites",
            )
        if self.lattice_spacing <= 0:
            raise ConfigurationError(
                f"lattice_spacing must be positive, got {self.lattice_spacing}",
                field="lattice.spacing",
            )
        if self.flavors not in (1, 2):
            raise ConfigurationError(
                f"flavors must be 1 or 2, got {self.flavors}", field="lattice.flavors"
            )

    def charge_offset(self, x: int) -> float:
        """Static background charge subtracted at site x."""
        if self.gauss_convention is GaussConvention.UNIFORM_HALF:
            return self.flavors / 2.0
        return self.flavors * (1 - (-1) ** x) / 2.0

    @property
    def charge_sign(self) -> int:
        """Sign with which (n_x - offset) enters G_x."""
        return +1 if self.gauss_convention is GaussConvention.UNIFORM_HALF else -1

    def charge_offsets(self) -> np.ndarray:
        """Vector of charge offsets over all sites."""
        return np.array([self.charge_offset(x) for x in range(self.n_sites)])


# --------------------------------------------------------------------------
# Gauge-field representations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegratedCoulomb:
    """No link degrees of freedom; gauge field eliminated via Gauss law.

    ``theta`` is the constant background Wilson-line phase entering the
    hopping term.
    """

    theta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta < 2 * np.pi:
            raise ConfigurationError(
                f"theta must lie in [0, 2*pi), got {self.theta}", field="gauge.theta"
            )

    link_dim: int = field(default=0, init=False, repr=False)


def _check_half_integer(two_s: float, name: str) -> int:
    two_s_int = int(round(two_s))
    if abs(two_s - two_s_int) > 1e-12 or two_s_int < 1:
        raise ConfigurationError(
            f"{name} must be a positive half-integer, got {two_s / 2}", field="gauge.spin"
        )
    return two_s_int


@dataclass(frozen=True)
class TruncatedInteger:
    """Integer electric fields clipped at |E| <= cutoff; U is a unit raise."""

    cutoff: int

    def __post_init__(self):
        if self.cutoff < 1:
            raise ConfigurationError(
                f"cutoff must be a positive integer, got {self.cutoff}",
                field="gauge.cutoff",
            )

    @property
    def link_dim(self) -> int:
        return 2 * self.cutoff + 1

    def e_value(self, q: int) -> float:
        return float(q - self.cutoff)

    def raise_element(self, q: int) -> float:
        """Matrix element <q+1|U|q>; zero past the clip."""
        return 1.0 if q + 1 < self.link_dim else 0.0


@dataclass(frozen=True)
class QuantumLink:
    """Spin-S link: U = S^+, E = S^z on a (2S+1)-dimensional ladder."""

    spin: float

    def __post_init__(self):
        _check_half_integer(2 * self.spin, "QuantumLink spin")

    @property
    def link_dim(self) -> int:
        return int(round(2 * self.spin)) + 1

    def e_value(self, q: int) -> float:
        return q - self.spin

    def raise_element(self, q: int) -> float:
        two_s = self.link_dim - 1
        if q + 1 >= self.link_dim:
            return 0.0
        return float(np.sqrt((q + 1) * (two_s - q)))


@dataclass(frozen=True)
class SchwingerBoson:
    """Two boson species per link with fixed total 2S.

    Link state q = n2 (so n1 = 2S - q); E = (n2 - n1)/2 = q - S and
    b2^dag b1 has the spin-S raising elements on the constrained subspace.
    """

    spin: float

    def __post_init__(self):
        _check_half_integer(2 * self.spin, "SchwingerBoson spin")

    @property
    def link_dim(self) -> int:
        return int(round(2 * self.spin)) + 1

    def e_value(self, q: int) -> float:
        return q - self.spin

    def raise_element(self, q: int) -> float:
        two_s = self.link_dim - 1
        if q + 1 >= self.link_dim:
            return 0.0
        return float(np.sqrt((q + 1) * (two_s - q)))

    def boson_numbers(self, q: int) -> tuple[int, int]:
        """(n1, n2) for link index q."""
        two_s = self.link_dim - 1
        return two_s - q, q


GaugeRep = Union[IntegratedCoulomb, TruncatedInteger, QuantumLink, SchwingerBoson]


# --------------------------------------------------------------------------
# Couplings
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CouplingSet:
    """All model couplings; unused entries are ignored by each builder.

    e_l, t, m feed the gauge models; t_f, t_b, u, gamma and the site
    potentials v_f, v_b1, v_b2 feed the energy-penalty model; g is the
    Schwinger-boson electric coupling.
    """

    e_l: float = 1.0
    t: float = 1.0
    m: float = 0.0
    t_f: float = 0.0
    t_b: float = 0.0
    u: float = 0.0
    gamma: float = 0.0
    g: float = 0.0
    v_f: tuple[float, ...] = ()
    v_b1: tuple[float, ...] = ()
    v_b2: tuple[float, ...] = ()

    def __post_init__(self):
        if self.e_l < 0:
            raise ConfigurationError(f"e_l must be >= 0, got {self.e_l}", field="couplings.e_l")
        if self.gamma < 0:
            raise ConfigurationError(
                f"gamma must be >= 0, got {self.gamma}", field="couplings.gamma"
            )
        for name in ("v_f", "v_b1", "v_b2"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))


# --------------------------------------------------------------------------
# Coulomb kernel
# --------------------------------------------------------------------------


def coulomb_potential(n_sites: int, d: int) -> float:
    """Periodic lattice Coulomb potential V(d) on a ring of n_sites.

    V(d) = (1/N) sum_{n=1}^{N-1} cos(2 pi n d / N) / (4 sin^2(pi n / N)).
    Satisfies the discrete Poisson identity
    2V(d) - V(d-1) - V(d+1) = delta_{d,0} - 1/N.
    """
    if n_sites < 2:
        raise ConfigurationError(f"n_sites must be >= 2, got {n_sites}")
    if not 0 <= d < n_sites:
        raise ConfigurationError(f"separation must lie in 0..{n_sites - 1}, got {d}")
    n = np.arange(1, n_sites)
    return float(
        np.sum(np.cos(2 * np.pi * n * d / n_sites) / (4 * np.sin(np.pi * n / n_sites) ** 2))
        / n_sites
    )


def coulomb_matrix(n_sites: int) -> np.ndarray:
    """Full N x N kernel V[(x - y) mod N]."""
    v = np.array([coulomb_potential(n_sites, d) for d in range(n_sites)])
    x = np.arange(n_sites)
    return v[(x[:, None] - x[None, :]) % n_sites]
