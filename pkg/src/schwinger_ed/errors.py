"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: configuration problems -> 2,
solver failures -> 3, capacity guards -> 4.
"""
from __future__ import annotations


class SchwingerEDError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(SchwingerEDError):
    """Invalid parameters, specs, or config-file contents.

    Carries an optional ``field`` naming the offending entry.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class CapacityError(SchwingerEDError):
    """A dimension or memory guard was exceeded."""


class UnsupportedRepresentationError(SchwingerEDError):
    """Operation not defined for the given gauge representation."""


class EmptySectorError(SchwingerEDError):
    """A requested gauge sector contains no states."""


class SolverConvergenceError(SchwingerEDError):
    """Eigensolver failed to reach tolerance; carries best residuals."""

    def __init__(self, message: str, residual_norms=None, eigenvalues=None):
        super().__init__(message)
        self.residual_norms = residual_norms
        self.eigenvalues = eigenvalues


class GapUndefinedError(SchwingerEDError):
    """Spectrum contains a single degenerate cluster; no gap exists."""


class DegeneracyError(SchwingerEDError):
    """Perturbative manifold is not spectrally isolated."""


class FitError(SchwingerEDError):
    """Least-squares fit is rank-deficient or under-determined."""
