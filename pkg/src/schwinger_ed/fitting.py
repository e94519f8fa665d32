"""Least-squares extrapolation fits for mass and finite-size trends."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import FitError


class FitModel(Enum):
    LINEAR_IN_INVERSE_N = "linear_in_inverse_n"
    LINEAR_IN_MASS = "linear_in_mass"
    POWER_LAW = "power_law"


@dataclass(frozen=True)
class FitResult:
    model: FitModel
    parameters: tuple[float, ...]
    parameter_errors: tuple[float, ...]
    residual_norm: float

    @property
    def intercept(self) -> float:
        """x -> 0 value for the linear models; log-amplitude for power law."""
        return self.parameters[0]

    @property
    def slope(self) -> float:
        return self.parameters[1]


def _linear_fit(x: np.ndarray, y: np.ndarray, model: FitModel) -> FitResult:
    design = np.column_stack([np.ones_like(x), x])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 2:
        raise FitError("rank-deficient design matrix")
    resid = y - design @ coef
    rss = float(resid @ resid)
    dof = max(len(x) - 2, 1)
    cov = rss / dof * np.linalg.inv(design.T @ design)
    errors = tuple(np.sqrt(np.maximum(np.diag(cov), 0.0)))
    return FitResult(model, tuple(coef), errors, float(np.linalg.norm(resid)))


def extrapolate(points: list[tuple[float, float]], model: FitModel) -> FitResult:
    """Least-squares fit of >= 3 points with distinct abscissas.

    LINEAR_IN_MASS / LINEAR_IN_INVERSE_N: y = intercept + slope * x, with the
    caller supplying x = m or x = 1/N; POWER_LAW: log y = log A + p log x
    (requires positive data).
    """
    if len(points) < 3:
        raise FitError(f"need at least 3 points, got {len(points)}")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if len(np.unique(x)) != len(x):
        raise FitError("abscissas must be distinct")
    if model is FitModel.POWER_LAW:
        if np.any(x <= 0) or np.any(y <= 0):
            raise FitError("power-law fit requires positive x and y")
        return _linear_fit(np.log(x), np.log(y), model)
    return _linear_fit(x, y, model)
