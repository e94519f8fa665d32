"""Extrapolation fits."""
import numpy as np
import pytest

from schwinger_ed.errors import FitError
from schwinger_ed.fitting import FitModel, extrapolate


class TestLinearInInverseN:
    def test_exact_recovery(self):
        # y = 0.5 + 2/N sampled without noise
        points = [(1.0 / n, 0.5 + 2.0 / n) for n in (8, 10, 12, 14, 16)]
        fit = extrapolate(points, FitModel.LINEAR_IN_INVERSE_N)
        assert fit.intercept == pytest.approx(0.5, abs=1e-12)
        assert fit.slope == pytest.approx(2.0, abs=1e-12)
        assert fit.residual_norm < 1e-12

    def test_parameter_errors_zero_for_exact_data(self):
        points = [(1.0 / n, 1.0 + 3.0 / n) for n in (4, 8, 12)]
        fit = extrapolate(points, FitModel.LINEAR_IN_INVERSE_N)
        assert np.all(np.asarray(fit.parameter_errors) < 1e-10)


class TestLinearInMass:
    def test_exact_recovery(self):
        points = [(m, -0.16 + 0.7 * m) for m in (0.15, 0.3, 0.6)]
        fit = extrapolate(points, FitModel.LINEAR_IN_MASS)
        assert fit.intercept == pytest.approx(-0.16, abs=1e-12)


class TestPowerLaw:
    def test_exact_recovery(self):
        points = [(g, 5.0 * g ** (-2.0)) for g in (10.0, 20.0, 40.0)]
        fit = extrapolate(points, FitModel.POWER_LAW)
        assert fit.slope == pytest.approx(-2.0, abs=1e-10)


class TestContracts:
    def test_requires_three_points(self):
        with pytest.raises(FitError):
            extrapolate([(1.0, 1.0), (2.0, 2.0)], FitModel.LINEAR_IN_MASS)

    def test_rejects_duplicate_abscissae(self):
        with pytest.raises(FitError):
            extrapolate(
                [(1.0, 1.0), (1.0, 2.0), (3.0, 3.0)], FitModel.LINEAR_IN_MASS
            )
