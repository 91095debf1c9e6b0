"""Grids, quadrature and sinc/WSK interpolation.

All Fourier transforms in this package use the unitary ordinary-frequency
convention F g(xi) = int g(t) exp(-2 pi i t xi) dt.  Quadrature is composite
trapezoid on uniform grids; for smooth, rapidly decaying integrands this is
spectrally accurate, and for bandlimited integrands the trapezoid sum is exact
up to aliasing once the spacing is below the Nyquist step (Poisson summation).

Summation order is deterministic (numpy reductions over fixed-layout arrays),
so results are bit-reproducible for a fixed build.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import TruncationWarning

__all__ = [
    "UniformGrid",
    "ComplexField2D",
    "QuadratureScheme",
    "sinc",
    "wsk_interpolate",
    "fourier_on_grid",
    "trapezoid_weights",
    "simpson_weights",
]


@dataclass(frozen=True)
class UniformGrid:
    """Uniform 1-D grid: point(i) = start + i*step for 0 <= i < count."""

    start: float
    step: float
    count: int

    def __post_init__(self) -> None:
        if not (self.step > 0):
            raise ValueError("step must be positive")
        if self.count < 1:
            raise ValueError("count must be at least 1")

    @property
    def stop(self) -> float:
        return self.start + (self.count - 1) * self.step

    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @classmethod
    def from_span(cls, lo: float, hi: float, step: float) -> "UniformGrid":
        """Grid covering [lo, hi] with the given step (hi included if it
        lands on a node, which it does for the span/step pairs used here)."""
        count = int(round((hi - lo) / step)) + 1
        return cls(lo, step, count)


@dataclass(frozen=True)
class ComplexField2D:
    """Complex values on a rectangular grid; rows follow x, columns y."""

    x_axis: UniformGrid
    y_axis: UniformGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        expected = (self.x_axis.count, self.y_axis.count)
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != {expected}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")


@dataclass(frozen=True)
class QuadratureScheme:
    """Truncated trapezoid rule on [-half_width, half_width].

    The node count is forced odd so that 0 is always a node.
    """

    spacing: float
    half_width: float

    def __post_init__(self) -> None:
        if not (self.spacing > 0):
            raise ValueError("spacing must be positive")
        if self.half_width < self.spacing:
            raise ValueError("half_width must be at least the spacing")

    def nodes(self) -> np.ndarray:
        n = int(np.floor(self.half_width / self.spacing))
        return self.spacing * np.arange(-n, n + 1)

    def shifted_nodes(self, center: float) -> np.ndarray:
        return center + self.nodes()


def sinc(x):
    """Normalized sinc, sin(pi x)/(pi x), with sinc(0) = 1."""
    return np.sinc(x)


def wsk_interpolate(samples: np.ndarray, spacing: float, t) -> np.ndarray:
    """Truncated Whittaker-Shannon series.

    `samples` is indexed n = -N..N (length 2N+1, center at index N) and the
    series sum_n samples[n] sinc(t/spacing - n) is evaluated at `t` (scalar
    or array).  Exact at the sample points t = n*spacing, |n| <= N.
    """
    samples = np.asarray(samples)
    if samples.ndim != 1 or samples.size % 2 != 1:
        raise ValueError("samples must be a 1-D array of odd length")
    if not (spacing > 0):
        raise ValueError("spacing must be positive")
    half = samples.size // 2
    n = np.arange(-half, half + 1)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    # Kernel matrix: (targets, samples).  Memory is fine at the truncation
    # lengths used here (N <= a few thousand).
    kernel = np.sinc(t_arr[:, None] / spacing - n[None, :])
    out = kernel @ samples
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return out[0]
    return out


def trapezoid_weights(count: int, spacing: float) -> np.ndarray:
    w = np.full(count, spacing)
    if count > 1:
        w[0] = w[-1] = spacing / 2.0
    return w


def simpson_weights(count: int, spacing: float) -> np.ndarray:
    """Composite Simpson weights; count must be odd (even interval count)."""
    if count < 3 or count % 2 == 0:
        raise ValueError("simpson rule needs an odd node count >= 3")
    w = np.full(count, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (spacing / 3.0)


def fourier_on_grid(
    samples_on: UniformGrid,
    values: np.ndarray,
    targets: UniformGrid,
    direction: str = "forward",
) -> np.ndarray:
    """Trapezoid approximation of the continuous Fourier transform.

    forward: F g(xi) = int g(t) exp(-2 pi i t xi) dt, evaluated at each
    target point; inverse flips the sign in the exponent.  Warns with
    TruncationWarning when the endpoint samples are not negligible relative
    to the peak (support not captured by the grid).
    """
    values = np.asarray(values)
    if values.shape != (samples_on.count,):
        raise ValueError("values length must match the sample grid")
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be 'forward' or 'inverse'")
    peak = np.max(np.abs(values)) if values.size else 0.0
    if peak > 0 and max(abs(values[0]), abs(values[-1])) > 1e-9 * peak:
        warnings.warn(
            "endpoint magnitudes exceed 1e-9 of the peak; integrand support "
            "is not captured by the grid",
            TruncationWarning,
            stacklevel=2,
        )
    t = samples_on.points()
    xi = targets.points()
    sign = -1.0 if direction == "forward" else 1.0
    w = trapezoid_weights(samples_on.count, samples_on.step)
    kernel = np.exp(sign * 2j * np.pi * np.outer(xi, t))
    return kernel @ (w * values)
