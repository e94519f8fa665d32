"""Exact diagonalization of the lattice Schwinger model (1 and 2 flavors).

Core layers:

- :mod:`schwinger_ed.lattice` / :mod:`schwinger_ed.basis`: geometry, gauge
  representations, deterministic basis enumeration.
- :mod:`schwinger_ed.gauss` / :mod:`schwinger_ed.symmetry`: Gauss-law
  generators, sector projection, discrete symmetries.
- :mod:`schwinger_ed.models`: Hamiltonian builders (Wilson/quantum links,
  gauge-integrated Coulomb gas, Jordan-Wigner spin chain, Schwinger bosons,
  energy-penalty scheme).
- :mod:`schwinger_ed.solver`: Lanczos with full reorthogonalization plus a
  dense oracle.
- :mod:`schwinger_ed.observables` / :mod:`schwinger_ed.effective` /
  :mod:`schwinger_ed.fitting`: measurements, effective theories, fits.
- :mod:`schwinger_ed.experiments` / :mod:`schwinger_ed.service` /
  :mod:`schwinger_ed.cli`: batch tasks, HTTP service, CLI client.
"""

from .basis import Basis, BasisState, enumerate_basis, enumerate_total_basis
from .errors import (
    CapacityError,
    ConfigurationError,
    DegeneracyError,
    EmptySectorError,
    FitError,
    GapUndefinedError,
    SchwingerEDError,
    SolverConvergenceError,
    UnsupportedRepresentationError,
)
from .gauss import (
    all_gauss_generators,
    gauss_generator,
    project_gauge_sector,
    total_gauss_square,
)
from .lattice import (
    CouplingSet,
    GaussConvention,
    IntegratedCoulomb,
    LatticeSpec,
    QuantumLink,
    SchwingerBoson,
    TruncatedInteger,
    coulomb_matrix,
    coulomb_potential,
)
from .linop import DiagonalOperator, LinearOperator
from .models import (
    build_full_gauge_hamiltonian,
    build_gauge_integrated,
    build_link_operators,
    build_penalty_h0,
    build_penalty_model,
    build_schwinger_boson_model,
    build_spin_hamiltonian,
)
from .observables import (
    ObservableReport,
    charge_and_field_profile,
    chiral_condensate,
    gauss_violation,
    heisenberg_reference,
    mass_gap,
)
from .effective import (
    degenerate_pt2,
    effective_first_order,
    penalty_scan,
    sector_projectors,
)
from .fitting import FitModel, FitResult, extrapolate
from .solver import SolverConfig, Spectrum, cluster_eigenvalues, dense_diag, lanczos_lowest
from .symmetry import (
    SymmetryKind,
    apply_symmetry_to_state,
    discrete_symmetry,
    translate_one_site,
    translation_operator,
)

__version__ = "0.1.0"
