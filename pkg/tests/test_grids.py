"""Grids, quadrature weights, WSK interpolation and the Fourier helper.

Oracles are closed forms computed independently of the code under test:
indicator transforms, sinc-series identities, and polynomial quadrature
exactness.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwphase import (
    TruncationWarning,
    UniformGrid,
    fourier_on_grid,
    simpson_weights,
    sinc,
    trapezoid_weights,
    wsk_interpolate,
)


class TestUniformGrid:
    def test_points_and_stop(self):
        g = UniformGrid(-1.0, 0.5, 5)
        assert np.allclose(g.points(), [-1.0, -0.5, 0.0, 0.5, 1.0])
        assert g.stop == 1.0

    def test_from_span_includes_endpoint(self):
        g = UniformGrid.from_span(-2.0, 2.0, 1.0 / 32.0)
        assert g.count == 129
        assert g.points()[0] == -2.0
        assert abs(g.stop - 2.0) < 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            UniformGrid(0.0, -1.0, 3)
        with pytest.raises(ValueError):
            UniformGrid(0.0, 1.0, 0)


class TestWeights:
    def test_trapezoid_weights_sum(self):
        w = trapezoid_weights(11, 0.1)
        # total weight equals the interval length
        assert abs(np.sum(w) - 1.0) < 1e-15
        assert w[0] == w[-1] == 0.05

    def test_simpson_exact_on_cubics(self):
        # Simpson integrates cubics exactly: int_0^1 t^3 dt = 1/4
        n = 11
        t = np.linspace(0.0, 1.0, n)
        w = simpson_weights(n, t[1] - t[0])
        assert abs(w @ t**3 - 0.25) < 1e-14

    def test_simpson_rejects_even_counts(self):
        with pytest.raises(ValueError):
            simpson_weights(10, 0.1)


class TestSinc:
    def test_normalization(self):
        assert sinc(0.0) == 1.0
        assert abs(sinc(1.0)) < 1e-15
        # sin(pi/2)/(pi/2) = 2/pi
        assert abs(sinc(0.5) - 2.0 / np.pi) < 1e-15

    @given(st.floats(-50.0, 50.0, allow_nan=False))
    def test_parity(self, x):
        assert sinc(-x) == sinc(x)


class TestWSK:
    def test_delta_samples_reproduce_kernel(self):
        # Kronecker delta at n=0, spacing 1/2 -> sinc(2t)
        samples = np.zeros(41)
        samples[20] = 1.0
        t = np.linspace(-3.0, 3.0, 101)
        out = wsk_interpolate(samples, 0.5, t)
        assert np.max(np.abs(out - np.sinc(2.0 * t))) < 1e-14

    def test_exact_at_sample_points(self):
        rng = np.random.default_rng(7)
        samples = rng.standard_normal(21)
        spacing = 0.25
        n = np.arange(-10, 11)
        out = wsk_interpolate(samples, spacing, n * spacing)
        assert np.max(np.abs(out - samples)) < 1e-12

    def test_sinc_squared_series(self):
        # f(t) = sinc^2(t) has triangular spectrum on [-1, 1]; samples at n/2
        # (rate 2 = Nyquist for bandwidth 1) reconstruct it.  N = 200 keeps
        # the truncation tail below 1e-4 on [-5, 5].
        n = np.arange(-200, 201)
        samples = np.sinc(n / 2.0) ** 2
        t = np.linspace(-5.0, 5.0, 401)
        out = wsk_interpolate(samples, 0.5, t)
        assert np.max(np.abs(out - np.sinc(t) ** 2)) <= 1e-4

    def test_input_validation(self):
        with pytest.raises(ValueError):
            wsk_interpolate(np.zeros(4), 0.5, 0.0)  # even length
        with pytest.raises(ValueError):
            wsk_interpolate(np.zeros(5), -1.0, 0.0)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 1000))
    def test_interpolant_is_linear_in_samples(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal(11)
        b = rng.standard_normal(11)
        t = rng.uniform(-2.0, 2.0, 5)
        lhs = wsk_interpolate(a + b, 0.5, t)
        rhs = wsk_interpolate(a, 0.5, t) + wsk_interpolate(b, 0.5, t)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


class TestFourierOnGrid:
    def test_indicator_transform(self):
        # F(chi_[-1/2,1/2])(xi) = sinc(xi)
        grid = UniformGrid.from_span(-0.5, 0.5, 1e-3)
        vals = np.ones(grid.count)
        targets = UniformGrid.from_span(-4.0, 4.0, 0.125)
        with pytest.warns(TruncationWarning):
            out = fourier_on_grid(grid, vals, targets)
        assert np.max(np.abs(out - np.sinc(targets.points()))) <= 1e-5

    def test_forward_inverse_signs(self):
        grid = UniformGrid.from_span(-8.0, 8.0, 1.0 / 64.0)
        vals = np.exp(-np.pi * grid.points() ** 2)
        targets = UniformGrid(0.25, 1.0, 1)
        fwd = fourier_on_grid(grid, vals, targets, "forward")
        inv = fourier_on_grid(grid, vals, targets, "inverse")
        # Gaussian is its own transform and even, so both agree with the
        # closed form e^{-pi xi^2}
        ref = np.exp(-np.pi * 0.25**2)
        assert abs(fwd[0] - ref) < 1e-12
        assert abs(inv[0] - ref) < 1e-12

    def test_truncation_warning(self):
        grid = UniformGrid.from_span(-1.0, 1.0, 0.01)
        vals = np.exp(-np.pi * grid.points() ** 2)  # endpoints not negligible
        with pytest.warns(TruncationWarning):
            fourier_on_grid(grid, vals, UniformGrid(0.0, 1.0, 1))

    def test_bad_direction(self):
        grid = UniformGrid(0.0, 1.0, 2)
        with pytest.raises(ValueError):
            fourier_on_grid(grid, np.zeros(2), grid, "sideways")
