import numpy as np
import pytest

from nophase.mollifier import (NORMALIZATION, mollifier, mollifier_deriv,
                               smooth_step, smooth_step_deriv,
                               smooth_step_deriv2, smooth_step_quad)
from nophase.quadrature import adaptive_gauss, gauss_panel


class TestQuadrature:
    def test_polynomial_exact(self):
        # 16-point Gauss is exact through degree 31
        val = gauss_panel(lambda t: t ** 8 - 3 * t ** 2 + 1, -1.0, 2.0)
        exact = (2.0 ** 9 + 1) / 9.0 - (2.0 ** 3 + 1) + 3.0
        assert val == pytest.approx(exact, rel=1e-14)

    def test_adaptive_smooth(self):
        val = adaptive_gauss(np.exp, 0.0, 1.0)
        assert val == pytest.approx(np.e - 1.0, rel=1e-14)

    def test_adaptive_kinked(self):
        val = adaptive_gauss(lambda t: np.abs(t), -1.0, 2.0, tol=1e-13)
        assert val == pytest.approx(2.5, abs=1e-12)


class TestMollifier:
    def test_support(self):
        u = np.array([-2.0, -1.0, 1.0, 3.0])
        assert np.all(mollifier(u) == 0.0)
        assert np.all(mollifier_deriv(u) == 0.0)

    def test_peak(self):
        assert mollifier(np.array([0.0]))[0] == pytest.approx(np.exp(-1.0))

    def test_symmetry(self):
        u = np.linspace(-0.99, 0.99, 31)
        assert np.max(np.abs(mollifier(u) - mollifier(-u))) == 0.0

    def test_normalization_value(self):
        # independent check on a fine trapezoid rule
        u = np.linspace(-1.0, 1.0, 200001)
        assert NORMALIZATION == pytest.approx(
            np.trapezoid(mollifier(u), u), abs=1e-10)


class TestSmoothStep:
    def test_exact_ends(self):
        assert smooth_step(-1.0) == 0.0
        assert smooth_step(1.0) == 1.0
        assert smooth_step(-5.0) == 0.0
        assert smooth_step(7.0) == 1.0

    def test_midpoint(self):
        assert smooth_step(0.0) == pytest.approx(0.5, abs=1e-13)

    def test_matches_direct_quadrature(self):
        for u in np.linspace(-0.97, 0.97, 17):
            assert smooth_step(u) == pytest.approx(smooth_step_quad(u),
                                                   abs=5e-14)

    def test_monotone_and_bounded(self):
        u = np.linspace(-1.2, 1.2, 2001)
        s = smooth_step(u)
        assert np.all(s >= 0.0) and np.all(s <= 1.0)
        assert np.all(np.diff(s) >= -1e-15)

    def test_derivative_consistency(self):
        u = np.linspace(-0.9, 0.9, 19)
        h = 1e-6
        fd = (smooth_step(u + h) - smooth_step(u - h)) / (2.0 * h)
        assert np.max(np.abs(fd - smooth_step_deriv(u))) <= 1e-8

    def test_second_derivative_consistency(self):
        u = np.linspace(-0.9, 0.9, 19)
        h = 1e-5
        fd = (smooth_step_deriv(u + h) - smooth_step_deriv(u - h)) / (2.0 * h)
        assert np.max(np.abs(fd - smooth_step_deriv2(u))) <= 1e-7
