import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from combcavity.errors import DomainError, NumericError
from combcavity.quadrature import adaptive_simpson


class TestScalarIntegrands:
    def test_cubic_is_exact(self):
        value, err = adaptive_simpson(lambda x: x ** 3, [0.0, 1.0, 2.0], 1e-9)
        # Simpson integrates cubics exactly, so no refinement is needed
        assert_allclose(value, [4.0], rtol=1e-14)
        assert np.all(err <= 1e-9)

    def test_runge_like_arctangent(self):
        value, _ = adaptive_simpson(lambda x: 1.0 / (1.0 + x * x),
                                    [-5.0, 5.0], 1e-12)
        assert_allclose(value, [2.0 * math.atan(5.0)], rtol=0.0, atol=1e-12)

    def test_narrow_gaussian_with_seeded_breakpoints(self):
        sigma = 1e-3
        points = [-10.0, -5.0 * sigma, 5.0 * sigma, 10.0]
        value, _ = adaptive_simpson(
            lambda x: np.exp(-0.5 * (x / sigma) ** 2), points, 1e-12)
        assert_allclose(value, [sigma * math.sqrt(2.0 * math.pi)], rtol=1e-9)

    def test_error_estimate_within_budget(self):
        value, err = adaptive_simpson(np.sin, [0.0, math.pi], 1e-8)
        assert_allclose(value, [2.0], rtol=0.0, atol=1e-8)
        assert np.all(err <= 1e-8)


class TestVectorIntegrands:
    def test_componentwise_values(self):
        def f(x):
            return np.stack([np.sin(x), np.cos(x)], axis=1)

        value, err = adaptive_simpson(f, [0.0, math.pi], 1e-10)
        assert value.shape == (2,) and err.shape == (2,)
        assert_allclose(value, [2.0, 0.0], rtol=0.0, atol=1e-10)

    def test_vector_matches_scalar_runs(self):
        def f(x):
            return np.stack([x * x, x ** 4], axis=1)

        value, _ = adaptive_simpson(f, [0.0, 2.0], 1e-12)
        s0, _ = adaptive_simpson(lambda x: x * x, [0.0, 2.0], 1e-12)
        s1, _ = adaptive_simpson(lambda x: x ** 4, [0.0, 2.0], 1e-12)
        assert_allclose(value, [s0[0], s1[0]], rtol=1e-12)

    def test_per_component_tolerance(self):
        def f(x):
            return np.stack([np.sin(x), 1e6 * np.sin(x)], axis=1)

        value, err = adaptive_simpson(f, [0.0, math.pi], [1e-8, 1e-2])
        assert_allclose(value, [2.0, 2e6], rtol=1e-8)
        assert err[0] <= 1e-8 and err[1] <= 1e-2


class TestValidation:
    @pytest.mark.parametrize("points", [
        [0.0], [], [1.0, 0.0], [0.0, 0.0, 1.0],
    ])
    def test_bad_points(self, points):
        with pytest.raises(DomainError):
            adaptive_simpson(np.sin, points, 1e-9)

    @pytest.mark.parametrize("tol", [0.0, -1e-9])
    def test_bad_tolerance(self, tol):
        with pytest.raises(DomainError):
            adaptive_simpson(np.sin, [0.0, 1.0], tol)

    def test_non_finite_integrand(self):
        def pole(x):
            return np.where(x == 0.0, np.inf, 1.0)

        with pytest.raises(NumericError):
            adaptive_simpson(pole, [-1.0, 1.0], 1e-9)

    def test_depth_budget_exceeded(self):
        with pytest.raises(NumericError, match="tolerance"):
            adaptive_simpson(np.sin, [0.0, math.pi], 1e-14, max_depth=0)
