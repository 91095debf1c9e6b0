"""Exact bandlimited signals with piecewise-constant spectra.

A PWSignal is determined by a bandwidth B and a finite list of disjoint
spectral pieces [a, b) with constant complex density.  Time evaluation,
spectral autocorrelation (hence the ambiguity function) and L2 norms all have
closed forms, so these signals serve as exact ground truth: no quadrature
error enters the reference side of any test.

Conventions: f(t) = int_{-B}^{B} F(xi) exp(2 pi i xi t) dxi, pieces are
half-open [a, b) for point lookups, and a Hermitian spectrum (mirror piece
[-b, -a] with conjugate value for every piece [a, b]) is equivalent to f
being real on the real line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadEpsilon
from .grids import UniformGrid

__all__ = [
    "SpectrumPiece",
    "PWSignal",
    "eval_time",
    "eval_spectrum",
    "random_pw_signal",
    "distance_up_to_phase",
    "counterexample_pair",
    "ambiguity_exact",
    "signal_to_json",
    "signal_from_json",
    "default_grid",
]


@dataclass(frozen=True)
class SpectrumPiece:
    a: float
    b: float
    value: complex

    def __post_init__(self) -> None:
        if not (self.a < self.b):
            raise ValueError("piece must satisfy a < b")


@dataclass(frozen=True)
class PWSignal:
    """Bandlimited signal with piecewise-constant spectrum on [-B, B]."""

    band: float
    pieces: tuple[SpectrumPiece, ...]
    real_on_line: bool = False

    def __post_init__(self) -> None:
        if not (self.band > 0 and np.isfinite(self.band)):
            raise ValueError("band must be positive and finite")
        object.__setattr__(self, "pieces", tuple(self.pieces))
        prev_b = -self.band - 0.0
        last = -np.inf
        for p in self.pieces:
            if p.a < -self.band - 1e-12 or p.b > self.band + 1e-12:
                raise ValueError("piece outside [-B, B]")
            if p.a < last - 1e-12:
                raise ValueError("pieces must be sorted and non-overlapping")
            last = p.b
        _ = prev_b
        if self.real_on_line and not self.is_hermitian():
            raise ValueError("real_on_line requires a Hermitian spectrum")

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        """Check that for every piece [a,b] there is a mirror [-b,-a] with
        conjugate value (after canonicalization)."""
        mirrored = sorted(
            (round(-p.b, 12), round(-p.a, 12), np.conj(p.value)) for p in self.pieces
        )
        direct = sorted((round(p.a, 12), round(p.b, 12), p.value) for p in self.pieces)
        if len(mirrored) != len(direct):
            return False
        for (a1, b1, v1), (a2, b2, v2) in zip(direct, mirrored):
            if abs(a1 - a2) > tol or abs(b1 - b2) > tol or abs(v1 - v2) > tol:
                return False
        return True

    def spectrum_norm2(self) -> float:
        """L2 norm of the spectral density, equal to the L2 norm of f."""
        return float(
            np.sqrt(sum(abs(p.value) ** 2 * (p.b - p.a) for p in self.pieces))
        )

    def eval_time(self, t):
        return eval_time(self, t)

    def eval_spectrum(self, xi):
        return eval_spectrum(self, xi)


def eval_time(f: PWSignal, t):
    """Closed-form time evaluation.

    Each piece contributes value*(b-a)*exp(pi i (a+b) t)*sinc((b-a) t), which
    is the stable rewriting of value*(e^{2 pi i b t}-e^{2 pi i a t})/(2 pi i t).
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(t_arr.shape, dtype=complex)
    for p in f.pieces:
        width = p.b - p.a
        out += (
            p.value
            * width
            * np.exp(1j * np.pi * (p.a + p.b) * t_arr)
            * np.sinc(width * t_arr)
        )
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return complex(out[0])
    return out


def eval_spectrum(f: PWSignal, xi):
    """Piecewise-constant lookup with half-open convention [a, b)."""
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.zeros(xi_arr.shape, dtype=complex)
    for p in f.pieces:
        mask = (xi_arr >= p.a) & (xi_arr < p.b)
        out[mask] = p.value
    if np.isscalar(xi) or np.asarray(xi).ndim == 0:
        return complex(out[0])
    return out


def ambiguity_exact(f: PWSignal, x, omega: float):
    """Ambiguity function A f(x, omega) from the spectral autocorrelation.

    A f(x, w) = e^{-pi i x w} int F(xi) conj(F(xi - w)) e^{2 pi i x xi} dxi,
    and for piecewise-constant F the integral is a finite sum of overlap
    integrals with exact closed form.  `x` may be an array; `omega` is scalar.
    In particular A f vanishes identically for |omega| >= 2B.
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    acc = np.zeros(x_arr.shape, dtype=complex)
    for pi_ in f.pieces:
        for pj in f.pieces:
            lo = max(pi_.a, pj.a + omega)
            hi = min(pi_.b, pj.b + omega)
            if hi <= lo:
                continue
            width = hi - lo
            # int_lo^hi e^{2 pi i x xi} dxi, stable at x = 0
            seg = width * np.exp(1j * np.pi * (lo + hi) * x_arr) * np.sinc(width * x_arr)
            acc += pi_.value * np.conj(pj.value) * seg
    out = np.exp(-1j * np.pi * x_arr * omega) * acc
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return complex(out[0])
    return out


def random_pw_signal(
    band: float, piece_count: int, real_on_line: bool, seed: int
) -> PWSignal:
    """Deterministic random signal with unit-L2 spectrum.

    Piece endpoints are sorted uniform draws; Hermitian signals are built on
    [0, B] and mirrored with conjugate (here: real) values.  For numerical
    conditioning the endpoints are redrawn (deterministically, continuing the
    generator stream) until every piece and every gap is at least 0.05*B/k
    wide, and the draws stay 10% clear of the band edge so the spectrum
    vanishes on a neighborhood of +-B.
    """
    if piece_count < 1:
        raise ValueError("piece_count must be at least 1")
    rng = np.random.default_rng(seed)
    min_gap = 0.05 * band / piece_count
    hi_edge = 0.9 * band
    lo_edge = 0.0 if real_on_line else -hi_edge
    edges = None
    for _ in range(1000):
        cand = np.sort(rng.uniform(lo_edge, hi_edge, size=2 * piece_count))
        if np.min(np.diff(cand)) >= min_gap if cand.size > 1 else True:
            edges = cand
            break
    if edges is None:  # pragma: no cover - vanishingly unlikely
        raise RuntimeError("could not draw well-separated spectrum edges")
    if real_on_line:
        values = rng.standard_normal(piece_count)
        pieces = []
        for k in range(piece_count):
            a, b = float(edges[2 * k]), float(edges[2 * k + 1])
            v = complex(values[k])
            pieces.append(SpectrumPiece(a, b, v))
            pieces.append(SpectrumPiece(-b, -a, np.conj(v)))
        pieces.sort(key=lambda p: p.a)
    else:
        values = rng.standard_normal(piece_count) + 1j * rng.standard_normal(piece_count)
        pieces = []
        for k in range(piece_count):
            a, b = float(edges[2 * k]), float(edges[2 * k + 1])
            pieces.append(SpectrumPiece(a, b, complex(values[k])))
    norm = np.sqrt(sum(abs(p.value) ** 2 * (p.b - p.a) for p in pieces))
    pieces = [SpectrumPiece(p.a, p.b, p.value / norm) for p in pieces]
    return PWSignal(band=band, pieces=tuple(pieces), real_on_line=real_on_line)


class PhaseDistance(NamedTuple):
    value: float
    alpha: float


def _as_grid_values(f, grid: UniformGrid) -> np.ndarray:
    if isinstance(f, PWSignal):
        return np.asarray(eval_time(f, grid.points()))
    arr = np.asarray(f, dtype=complex)
    if arr.shape != (grid.count,):
        raise ValueError("sample array length must match the grid")
    return arr


def distance_up_to_phase(f, g, grid: UniformGrid, up_to: str = "phase") -> PhaseDistance:
    """Discrete L2 distance minimized over a global phase (or sign).

    min_alpha ||f - e^{i alpha} g|| = sqrt(||f||^2 + ||g||^2 - 2|<f,g>|),
    attained at alpha* = arg <f, g>.  With up_to="sign" the minimization runs
    over alpha in {0, pi} only.
    """
    fv = _as_grid_values(f, grid)
    gv = _as_grid_values(g, grid)
    w = grid.step
    nf2 = float(np.sum(np.abs(fv) ** 2) * w)
    ng2 = float(np.sum(np.abs(gv) ** 2) * w)
    inner = complex(np.sum(fv * np.conj(gv)) * w)
    if up_to == "phase":
        cross = abs(inner)
        alpha = float(np.angle(inner))
    elif up_to == "sign":
        cross = abs(inner.real)
        alpha = 0.0 if inner.real >= 0 else float(np.pi)
    else:
        raise ValueError("up_to must be 'phase' or 'sign'")
    val = float(np.sqrt(max(nf2 + ng2 - 2.0 * cross, 0.0)))
    return PhaseDistance(val, alpha)


def counterexample_pair(kind: str, band: float, eps: float | None = None):
    """The two explicit non-uniqueness pairs.

    real:    f = sinc(Bz) and g = sinc(Bz) e^{pi i B z}; |f| = |g| on the
             line but f, g differ beyond a global phase.
    complex: spectra chi_[B-eps, B]/eps and chi_[-B, -B+eps]/eps; |f| = |g|
             and f(t) conj(f(t-c)) = g(t) conj(g(t-c)) at c = 1/(2B - eps).
    """
    B = float(band)
    if kind == "real":
        f = PWSignal(B, (SpectrumPiece(-B / 2, B / 2, 1.0 / B),), real_on_line=True)
        g = PWSignal(B, (SpectrumPiece(0.0, B, 1.0 / B),), real_on_line=False)
        return f, g
    if kind == "complex":
        if eps is None or not (0.0 < eps < 2.0 * B):
            raise BadEpsilon("complex counterexample requires 0 < eps < 2B")
        f = PWSignal(B, (SpectrumPiece(B - eps, B, 1.0 / eps),))
        g = PWSignal(B, (SpectrumPiece(-B, -B + eps, 1.0 / eps),))
        return f, g
    raise ValueError("kind must be 'real' or 'complex'")


def default_grid(band: float) -> UniformGrid:
    """Default evaluation window [-8/B, 8/B], step min(1e-2, 1/(32B))."""
    step = min(1e-2, 1.0 / (32.0 * band))
    half = 8.0 / band
    count = 2 * int(round(half / step)) + 1
    return UniformGrid(-half, step, count)


def signal_to_json(f: PWSignal) -> str:
    doc = {
        "B": f.band,
        "real_on_line": f.real_on_line,
        "pieces": [
            {"a": p.a, "b": p.b, "re": float(np.real(p.value)), "im": float(np.imag(p.value))}
            for p in f.pieces
        ],
    }
    return json.dumps(doc, sort_keys=True)


def signal_from_json(text: str) -> PWSignal:
    doc = json.loads(text)
    pieces = tuple(
        SpectrumPiece(p["a"], p["b"], complex(p["re"], p["im"])) for p in doc["pieces"]
    )
    return PWSignal(band=doc["B"], pieces=pieces, real_on_line=doc["real_on_line"])
