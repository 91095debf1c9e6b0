"""Window gallery: special-function oracles, closed-form ambiguities,
Fourier transforms, and serialization.

Frozen oracle values (computed by hand from the defining formulas):
  L_1(2) = 1 - 2 = -1;  L_2(1) = 1 - 2 + 1/2 = -1/2;  L_1^(1)(1) = 2 - 1 = 1
  H_0(0) = 2^(1/4)
  Gaussian ambiguity at the origin: 1/sqrt(2) (the L2 norm squared of
  e^{-pi t^2})
  Hanning transform: F(cos^2 t on [-pi/2, pi/2])(xi)
    = (pi/2) sinc(pi xi) + (pi/4)[sinc(pi(xi - 1/pi)) + sinc(pi(xi + 1/pi))]
"""

import math

import numpy as np
import pytest

from pwphase import (
    IndexTooLarge,
    UniformGrid,
    WindowSpec,
    ambiguity_quadrature,
    ambiguity_slice,
    hermite_eval,
    laguerre_eval,
    random_pw_signal,
    window_ambiguity,
    window_eval,
    window_from_dict,
    window_ft,
    window_to_dict,
)


class TestLaguerre:
    def test_frozen_values(self):
        assert abs(laguerre_eval(1, 0, 2.0) - (-1.0)) < 1e-14
        assert abs(laguerre_eval(2, 0, 1.0) - (-0.5)) < 1e-14
        assert abs(laguerre_eval(1, 1, 1.0) - 1.0) < 1e-14

    def test_value_at_zero(self):
        # L_n^(0)(0) = 1 for all n
        for n in range(8):
            assert abs(laguerre_eval(n, 0, 0.0) - 1.0) < 1e-13

    def test_recurrence(self):
        # (k+1) L_{k+1}(x) = (2k+1-x) L_k(x) - k L_{k-1}(x)
        x = np.linspace(0.0, 8.0, 30)
        for k in range(1, 6):
            lhs = (k + 1) * laguerre_eval(k + 1, 0, x)
            rhs = (2 * k + 1 - x) * laguerre_eval(k, 0, x) - k * laguerre_eval(k - 1, 0, x)
            assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_validation(self):
        with pytest.raises(ValueError):
            laguerre_eval(-1, 0, 0.0)


class TestHermite:
    def test_ground_state(self):
        assert abs(hermite_eval(0, 0.0) - 2.0**0.25) < 1e-14

    def test_orthonormality(self):
        t = np.linspace(-8.0, 8.0, 4001)
        dt = t[1] - t[0]
        for m in range(4):
            for n in range(4):
                inner = np.sum(hermite_eval(m, t) * hermite_eval(n, t)) * dt
                assert abs(inner - (1.0 if m == n else 0.0)) < 1e-8

    def test_parity(self):
        t = np.linspace(0.1, 3.0, 17)
        for n in range(5):
            sign = (-1.0) ** n
            assert np.max(np.abs(hermite_eval(n, -t) - sign * hermite_eval(n, t))) < 1e-12

    def test_fourier_eigenproperty(self):
        # F H_n = (-i)^n H_n, checked by direct quadrature
        t = np.linspace(-10.0, 10.0, 8001)
        dt = t[1] - t[0]
        xi = np.array([-1.2, -0.3, 0.0, 0.7, 1.5])
        for n in range(4):
            h = hermite_eval(n, t)
            ft = (np.exp(-2j * np.pi * np.outer(xi, t)) @ h) * dt
            ref = (-1j) ** n * hermite_eval(n, xi)
            assert np.max(np.abs(ft - ref)) < 1e-8

    def test_index_cap(self):
        with pytest.raises(IndexTooLarge):
            hermite_eval(21, 0.0)
        with pytest.raises(ValueError):
            hermite_eval(-1, 0.0)


class TestWindowSpec:
    def test_unknown_family(self):
        with pytest.raises(ValueError):
            WindowSpec(family="kaiser")

    def test_pw_requires_signal(self):
        with pytest.raises(ValueError):
            WindowSpec(family="pw")

    def test_supports(self):
        assert WindowSpec("rect").support() == (-1.0, 1.0)
        lo, hi = WindowSpec("hanning").support()
        assert abs(lo + np.pi / 2) < 1e-15 and abs(hi - np.pi / 2) < 1e-15
        assert WindowSpec("gaussian").support() is None


class TestWindowFT:
    def test_gaussian_self_transform(self):
        w = WindowSpec("gaussian")
        xi = np.linspace(-2.0, 2.0, 9)
        assert np.max(np.abs(window_ft(w, xi) - np.exp(-np.pi * xi**2))) < 1e-14

    def test_rect_zero(self):
        # 2 sinc(2 xi) vanishes at xi = 1/2
        assert abs(window_ft(WindowSpec("rect"), 0.5)) < 1e-14

    def test_hanning_closed_form(self):
        w = WindowSpec("hanning")
        xi = np.linspace(-3.0, 3.0, 25)
        ref = (np.pi / 2.0) * np.sinc(np.pi * xi) + (np.pi / 4.0) * (
            np.sinc(np.pi * (xi - 1.0 / np.pi)) + np.sinc(np.pi * (xi + 1.0 / np.pi))
        )
        assert np.max(np.abs(window_ft(w, xi) - ref)) < 1e-8

    def test_pw_window_spectrum(self):
        f = random_pw_signal(1.0, 2, True, 0)
        w = WindowSpec("pw", signal=f)
        xi = np.array([0.1, 0.5])
        ref = np.array([f.eval_spectrum(x) for x in xi])
        assert np.max(np.abs(window_ft(w, xi) - ref)) < 1e-14


class TestAmbiguity:
    def test_gaussian_closed_form_origin(self):
        w = WindowSpec("gaussian")
        assert abs(window_ambiguity(w, 0.0, 0.0) - 1.0 / math.sqrt(2.0)) < 1e-14

    def test_hermite_norm_at_origin(self):
        for n in range(11):
            w = WindowSpec("hermite", n=n)
            assert abs(window_ambiguity(w, 0.0, 0.0) - 1.0) < 1e-10

    def test_quadrature_matches_closed_forms(self):
        pts = [(0.0, 0.0), (0.5, -0.25), (-1.0, 0.75), (0.3, 1.1)]
        for fam, n in (("gaussian", 0), ("hermite", 1), ("hermite", 3), ("rect", 0)):
            w = WindowSpec(fam, n=n)
            for x, om in pts:
                quad = ambiguity_quadrature(w, x, om)
                closed = window_ambiguity(w, x, om)
                assert abs(quad - closed) < 1e-6, (fam, n, x, om)

    def test_hermite1_ring(self):
        # A H_1(0, omega) = e^{-pi omega^2 / 2} (1 - pi omega^2) vanishes at
        # omega = 1/sqrt(pi)
        w = WindowSpec("hermite", n=1)
        assert abs(window_ambiguity(w, 0.0, 1.0 / math.sqrt(math.pi))) < 1e-12

    def test_rect_disjoint_supports(self):
        w = WindowSpec("rect")
        assert window_ambiguity(w, 2.5, 0.3) == 0.0
        assert ambiguity_quadrature(w, 2.5, 0.3) == 0.0

    def test_pw_window_uses_exact_path(self):
        f = random_pw_signal(1.0, 2, False, 1)
        w = WindowSpec("pw", signal=f)
        from pwphase import ambiguity_exact

        assert abs(window_ambiguity(w, 0.4, 0.2) - ambiguity_exact(f, 0.4, 0.2)) < 1e-14

    def test_slice_container(self):
        w = WindowSpec("gaussian")
        axis = UniformGrid.from_span(-2.0, 2.0, 0.25)
        s = ambiguity_slice(w, 0.0, axis)
        assert s.values.shape == (axis.count,)
        assert abs(s.min_modulus() - (1.0 / math.sqrt(2.0)) * math.exp(-2.0 * np.pi)) < 1e-10


class TestSerialization:
    def test_roundtrip_plain(self):
        for w in (WindowSpec("gaussian"), WindowSpec("hermite", n=3), WindowSpec("rect")):
            assert window_from_dict(window_to_dict(w)) == w

    def test_roundtrip_pw(self):
        f = random_pw_signal(1.0, 2, True, 5)
        w = WindowSpec("pw", signal=f)
        w2 = window_from_dict(window_to_dict(w))
        assert w2.family == "pw" and w2.signal == f
