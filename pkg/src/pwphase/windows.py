"""Window gallery: Gaussian, Hermite, rectangular, Hanning, signal-as-window.

Closed-form ambiguity functions are used where they exist (Gaussian, Hermite
via Laguerre polynomials, and PW signals via their spectral autocorrelation);
the compactly supported windows fall back to quadrature with the integration
grid pinned to the support overlap, so no jump sits between nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IndexTooLarge
from .grids import UniformGrid, simpson_weights
from .signals import PWSignal, ambiguity_exact, eval_spectrum, eval_time

__all__ = [
    "WindowSpec",
    "AmbiguitySlice",
    "laguerre_eval",
    "hermite_eval",
    "window_eval",
    "window_ft",
    "window_ambiguity",
    "ambiguity_quadrature",
    "ambiguity_slice",
    "window_to_dict",
    "window_from_dict",
]

HERMITE_CAP = 20

FAMILIES = ("gaussian", "hermite", "rect", "hanning", "pw")


@dataclass(frozen=True)
class WindowSpec:
    family: str
    n: int = 0
    signal: PWSignal | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown window family {self.family!r}")
        if self.family == "hermite" and self.n < 0:
            raise ValueError("hermite index must be >= 0")
        if self.family == "pw" and self.signal is None:
            raise ValueError("pw window requires a signal")

    def support(self) -> tuple[float, float] | None:
        """Exact support for compact windows, None for the others."""
        if self.family == "rect":
            return (-1.0, 1.0)
        if self.family == "hanning":
            return (-np.pi / 2.0, np.pi / 2.0)
        return None

    def is_real(self) -> bool:
        if self.family == "pw":
            return self.signal.real_on_line
        return True


def laguerre_eval(k: int, j: int, t) -> float:
    """Generalized Laguerre polynomial L_k^(j) by its finite sum."""
    if k < 0 or j < 0:
        raise ValueError("k and j must be nonnegative")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(t_arr.shape)
    for m in range(k + 1):
        out += math.comb(k + j, k - m) * (-t_arr) ** m / math.factorial(m)
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return float(out[0])
    return out


def hermite_eval(n: int, t):
    """L2-normalized Hermite function under the e^{-pi t^2} convention.

    H_0(t) = 2^(1/4) e^{-pi t^2}; three-term recurrence
    H_{n+1}(t) = 2 sqrt(pi/(n+1)) t H_n(t) - sqrt(n/(n+1)) H_{n-1}(t).
    The Fourier transform (ordinary-frequency convention) satisfies
    F H_n = (-i)^n H_n.
    """
    if n > HERMITE_CAP:
        raise IndexTooLarge(f"hermite index {n} exceeds cap {HERMITE_CAP}")
    if n < 0:
        raise ValueError("hermite index must be >= 0")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    h_prev = np.zeros(t_arr.shape)
    h = 2.0 ** 0.25 * np.exp(-np.pi * t_arr**2)
    for k in range(n):
        h, h_prev = (
            2.0 * np.sqrt(np.pi / (k + 1)) * t_arr * h - np.sqrt(k / (k + 1.0)) * h_prev,
            h,
        )
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return float(h[0])
    return h


def window_eval(w: WindowSpec, t):
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if w.family == "gaussian":
        out = np.exp(-np.pi * t_arr**2).astype(complex)
    elif w.family == "hermite":
        out = np.asarray(hermite_eval(w.n, t_arr), dtype=complex)
    elif w.family == "rect":
        out = ((t_arr >= -1.0) & (t_arr <= 1.0)).astype(complex)
    elif w.family == "hanning":
        out = np.where(
            np.abs(t_arr) <= np.pi / 2.0, np.cos(t_arr) ** 2, 0.0
        ).astype(complex)
    else:
        out = np.asarray(eval_time(w.signal, t_arr), dtype=complex)
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return complex(out[0])
    return out


def window_ft(w: WindowSpec, xi):
    """Fourier transform of the window at frequency xi."""
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    if w.family == "gaussian":
        out = np.exp(-np.pi * xi_arr**2).astype(complex)
    elif w.family == "rect":
        out = (2.0 * np.sinc(2.0 * xi_arr)).astype(complex)
    elif w.family == "hermite":
        out = (-1j) ** w.n * np.asarray(hermite_eval(w.n, xi_arr), dtype=complex)
    elif w.family == "pw":
        out = np.asarray(eval_spectrum(w.signal, xi_arr), dtype=complex)
    else:  # hanning: quadrature over the exact support
        lo, hi = w.support()
        n = 4096
        t = np.linspace(lo, hi, n + 1)
        vals = np.cos(t) ** 2
        wts = simpson_weights(n + 1, (hi - lo) / n)
        out = np.exp(-2j * np.pi * np.outer(xi_arr, t)) @ (wts * vals)
    if np.isscalar(xi) or np.asarray(xi).ndim == 0:
        return complex(out[0])
    return out


def ambiguity_quadrature(w: WindowSpec, x: float, omega, spacing: float = 1e-3):
    """A w(x, omega) = e^{pi i x omega} V_w w(x, omega) by composite Simpson.

    The integration interval is the overlap of the (effective) supports of
    w(t) and w(t - x), so compact windows contribute no off-support error and
    the integrand is smooth on the whole interval.
    """
    supp = w.support()
    if supp is None:
        half = 8.0
        lo, hi = -half + min(x, 0.0), half + max(x, 0.0)
    else:
        lo = max(supp[0], supp[0] + x)
        hi = min(supp[1], supp[1] + x)
        if hi <= lo:
            om = np.atleast_1d(np.asarray(omega, dtype=float))
            zero = np.zeros(om.shape, dtype=complex)
            return zero if np.ndim(omega) else complex(0)
    n = max(int(np.ceil((hi - lo) / spacing)), 8)
    if n % 2 == 1:
        n += 1
    t = np.linspace(lo, hi, n + 1)
    integrand = window_eval(w, t) * np.conj(window_eval(w, t - x))
    wts = simpson_weights(n + 1, (hi - lo) / n)
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    v = np.exp(-2j * np.pi * np.outer(om, t)) @ (wts * integrand)
    out = np.exp(1j * np.pi * x * om) * v
    if np.ndim(omega) == 0:
        return complex(out[0])
    return out


_ambiguity_quadrature = ambiguity_quadrature


def window_ambiguity(w: WindowSpec, x: float, omega, spacing: float = 1e-3):
    """Ambiguity function A w(x, omega); closed form where available.

    Gaussian: (1/sqrt 2) e^{-(pi/2)(x^2 + omega^2)}.
    Hermite:  e^{-(pi/2)|z|^2} L_n(pi |z|^2), z = x + i omega.
    Rect:     e^{pi i x omega} L e^{-pi i (lo+hi) omega} sinc(L omega) with
              [lo, hi] the support overlap of the two shifted copies.
    PW signal: exact spectral autocorrelation.
    Hanning: quadrature (closed support, chirped self-STFT).
    """
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    if w.family == "rect":
        lo, hi = max(-1.0, -1.0 + x), min(1.0, 1.0 + x)
        if hi <= lo:
            out = np.zeros(om.shape, dtype=complex)
        else:
            length = hi - lo
            out = (
                np.exp(1j * np.pi * x * om)
                * length
                * np.exp(-1j * np.pi * (lo + hi) * om)
                * np.sinc(length * om)
            ).astype(complex)
    elif w.family == "gaussian":
        out = (1.0 / np.sqrt(2.0)) * np.exp(-np.pi / 2.0 * (x**2 + om**2))
        out = out.astype(complex)
    elif w.family == "hermite":
        r2 = x**2 + om**2
        out = np.exp(-np.pi / 2.0 * r2) * laguerre_eval(w.n, 0, np.pi * np.atleast_1d(r2))
        out = np.atleast_1d(out).astype(complex)
    elif w.family == "pw":
        out = np.array(
            [ambiguity_exact(w.signal, x, float(o)) for o in om], dtype=complex
        )
    else:
        out = np.atleast_1d(ambiguity_quadrature(w, x, om, spacing=spacing))
    if np.ndim(omega) == 0:
        return complex(out[0])
    return out


@dataclass(frozen=True)
class AmbiguitySlice:
    axis: UniformGrid
    x0: float
    values: np.ndarray
    floored_bins: int = 0
    noise_bound: float = 0.0

    def min_modulus(self) -> float:
        return float(np.min(np.abs(self.values)))


def ambiguity_slice(w: WindowSpec, x0: float, axis: UniformGrid) -> AmbiguitySlice:
    values = np.atleast_1d(window_ambiguity(w, x0, axis.points()))
    return AmbiguitySlice(axis=axis, x0=x0, values=values)


def window_to_dict(w: WindowSpec) -> dict:
    import json

    from .signals import signal_to_json

    doc: dict = {"family": w.family}
    if w.family == "hermite":
        doc["n"] = w.n
    if w.family == "pw":
        doc["signal"] = json.loads(signal_to_json(w.signal))
    return doc


def window_from_dict(doc: dict) -> WindowSpec:
    import json

    from .signals import signal_from_json

    family = doc["family"]
    n = int(doc.get("n", 0))
    signal = None
    if family == "pw":
        signal = signal_from_json(json.dumps(doc["signal"]))
    return WindowSpec(family=family, n=n, signal=signal)
