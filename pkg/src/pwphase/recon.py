"""Reconstruction pipelines built from the ambiguity-function machinery.

Four pipelines share a handful of primitives:

* recover_af_slice: divide the 2-D Fourier transform of the squared STFT
  magnitude by the conjugate window ambiguity to obtain one slice A f(x0, .).
* sign_retrieve: recover a real bandlimited function up to global sign from
  the magnitudes of its 4B-rate samples, by interpolating q = u^2, locating
  its zeros, and choosing the sign pattern across zero-separated segments
  that minimizes out-of-band energy.
* select_anchor / propagate_phase: pick a lattice offset on which |f| stays
  away from zero and chain phases along it through the cross-correlation
  r_c(t) = f(t) conj(f(t-c)).

All pipelines resolve the signal only up to the stated global ambiguity
(sign for real signals, unimodular phase for complex ones) and report a
self-consistency residual obtained by re-simulating the measurements from
the reconstruction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    CUpsampleBound,
    NoAnchor,
    NoisyMagnitudes,
    NotRealConsistent,
    SpectrumFloorExceeded,
    StripNotFound,
    TooManySegments,
    UnstableChain,
    WindowNotReal,
)
from .grids import UniformGrid, simpson_weights, trapezoid_weights, wsk_interpolate
from .signals import default_grid
from .transforms import MagnitudeGrid, MagnitudeSamples, default_quadrature, stft_grid
from .windows import AmbiguitySlice, WindowSpec, window_ambiguity, window_ft

__all__ = [
    "CrossCorrelationSlice",
    "ReconstructionReport",
    "SignRetrieval",
    "recover_af_slice",
    "sign_retrieve",
    "select_anchor",
    "propagate_phase",
    "reconstruct_real_full",
    "reconstruct_real_sampled",
    "reconstruct_complex_two_slices",
    "reconstruct_complex_strip",
    "report_to_json",
]


@dataclass(frozen=True)
class CrossCorrelationSlice:
    """r_c(t) = f(t) conj(f(t-c)) sampled on t_axis."""

    c: float
    t_axis: UniformGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != (self.t_axis.count,):
            raise ValueError("values length must match t_axis")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")
        if self.c == 0.0 and self.values.size:
            peak = float(np.max(np.abs(self.values)))
            if peak > 0 and (
                np.max(np.abs(np.imag(self.values))) > 1e-6 * peak
                or np.min(np.real(self.values)) < -1e-6 * peak
            ):
                raise ValueError("r_0 must be (numerically) real and nonnegative")


@dataclass(frozen=True)
class ReconstructionReport:
    grid: UniformGrid
    signal: np.ndarray
    resolved_up_to: str  # "global_sign" | "global_phase"
    residual: float
    diagnostics: tuple

    def diagnostic(self, key: str, default=None):
        for k, v in self.diagnostics:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class SignRetrieval:
    grid: UniformGrid
    values: np.ndarray
    signed_samples: np.ndarray
    boundaries: tuple
    segment_count: int
    enumerated_bits: int


def recover_af_slice(
    m: MagnitudeGrid,
    w: WindowSpec,
    x0: float,
    omega_axis: UniformGrid,
    floor: float | None = None,
) -> AmbiguitySlice:
    """One slice of A f from squared magnitudes via the ambiguity relation.

    F(|V_w f|^2)(omega, -x0) = A f(x0, omega) conj(A w(x0, omega)); the left
    side is evaluated by iterated trapezoid sums over the measurement grid and
    divided by the closed-form window ambiguity.  Bins where |A w| falls below
    floor (relative to the in-band maximum, default 1e-8) are zeroed and
    counted; more than 20% floored bins raises VanishingAmbiguity.
    """
    from .errors import VanishingAmbiguity

    xs = m.x_axis.points()
    oms_meas = m.omega_axis.points()
    target = omega_axis.points()
    wts_o = trapezoid_weights(oms_meas.size, m.omega_axis.step)
    sq = m.values.astype(float) ** 2
    g = sq @ (wts_o * np.exp(2j * np.pi * oms_meas * x0))
    # calibration frequencies just beyond the requested axis: when the axis
    # covers the full support of the slice, the transform is exactly zero out
    # there, so its measured size estimates the numerical noise of the
    # transform itself
    tmax = float(np.max(np.abs(target)))
    cal_half = tmax * (1.02 + 0.02 * np.arange(16))
    cal = np.concatenate([-cal_half[::-1], cal_half])
    lhs_all = _tail_extended_transform(m.x_axis, g, np.concatenate([target, cal]))
    lhs = lhs_all[: target.size]
    eta = float(np.max(np.abs(lhs_all[target.size :])))
    aw = np.atleast_1d(window_ambiguity(w, float(x0), target))
    absaw = np.abs(aw)
    mx = float(np.max(absaw))
    rel = 1e-8 if floor is None else float(floor)
    floor_abs = rel * mx
    mask = absaw >= floor_abs
    vals = np.zeros(target.size, dtype=complex)
    vals[mask] = lhs[mask] / np.conj(aw[mask])
    floored = int(np.count_nonzero(~mask))
    if floored > 0.2 * target.size:
        raise VanishingAmbiguity(
            f"{floored}/{target.size} bins of |A w({x0}, .)| below floor"
        )
    # propagated to time domain, transform noise eta turns into an additive
    # error of at most int eta / |A w| d omega on the inverse of the slice
    noise_bound = float(
        eta * np.sum(trapezoid_weights(target.size, omega_axis.step)[mask] / absaw[mask])
    )
    return AmbiguitySlice(
        axis=omega_axis,
        x0=float(x0),
        values=vals,
        floored_bins=floored,
        noise_bound=noise_bound,
    )


def _tail_extended_transform(
    x_axis: UniformGrid, g: np.ndarray, target: np.ndarray
) -> np.ndarray:
    """Fourier transform of the collapsed measurement with tail completion.

    The collapsed data g(x) is a cross-correlation of two bandlimited
    functions smoothed by the window autocorrelation, so beyond the data
    window it behaves as a trigonometric sum over the spectral breakpoints
    damped by 1/x^2.  A hard cutoff therefore leaves an O(1/X) error at the
    resonant frequencies.  This routine fits that tail on the outer half of
    the data (matching-pursuit peak picking plus joint least squares over
    e^{2 pi i theta x} (1 + beta/x) / x^2 components), extends the transform
    sum with the fitted model far beyond the data, and removes the remaining
    model-truncation error by Richardson extrapolation in the cutoff.
    """
    xs = x_axis.points()
    h = x_axis.step
    wts_x = trapezoid_weights(xs.size, h)
    lhs = np.exp(-2j * np.pi * np.outer(target, xs)) @ (wts_x * g)
    span = min(-xs[0], xs[-1])
    if span < 64.0:
        return lhs
    fit_mask = (np.abs(xs) >= 0.5 * span) & (np.abs(xs) < (5.0 / 6.0) * span)
    val_mask = np.abs(xs) >= (5.0 / 6.0) * span
    xa = xs[fit_mask]
    ha = (g[fit_mask] * xa**2).astype(complex)
    xv = xs[val_mask]
    hv = (g[val_mask] * xv**2).astype(complex)
    hmax = float(np.max(np.abs(ha)))
    if hmax <= 1e-12 * max(float(np.max(np.abs(g))), 1e-300):
        return lhs

    # Real collapsed data must stay exactly real through the extension so the
    # recovered correlation keeps its Hermitian symmetry; use a cosine/sine
    # parametrization in that case instead of complex exponentials.
    is_real = float(np.max(np.abs(g.imag))) <= 1e-9 * float(np.max(np.abs(g)))
    tmax = float(np.max(np.abs(target))) * 1.05 + 0.25
    if is_real:
        ha = ha.real
        hv = hv.real
        scan = np.arange(0.0, tmax, 1.0 / (32.0 * span))
    else:
        scan = np.arange(-tmax, tmax, 1.0 / (32.0 * span))
    scan_kernel = np.exp(-2j * np.pi * np.outer(scan, xa))

    def design_for(theta_list, x):
        cols = []
        for t0 in theta_list:
            if is_real:
                c = np.cos(2.0 * np.pi * t0 * x)
                s = np.sin(2.0 * np.pi * t0 * x)
                cols.extend([c, s, c / x, s / x])
            else:
                e = np.exp(2j * np.pi * t0 * x)
                cols.extend([e, e / x])
        return np.array(cols).T

    # Matching pursuit with validation on the outermost sixth of the data:
    # the component count that extrapolates best outward wins.  Past that
    # point extra components chase the unmodelled 1/x^3 remainder with
    # clusters of nearby frequencies that fit the annulus but diverge beyond
    # it.
    thetas: list[float] = []
    resid = ha.copy()
    best_err = np.inf
    best: tuple[list[float], np.ndarray] | None = None
    for _ in range(40):
        z = scan_kernel @ resid
        j = int(np.argmax(np.abs(z)))
        theta = scan[j]
        if 0 < j < scan.size - 1:
            y0, y1, y2 = np.abs(z[j - 1]), np.abs(z[j]), np.abs(z[j + 1])
            denom = y0 - 2.0 * y1 + y2
            if denom != 0.0:
                theta += 0.5 * (y0 - y2) / denom * (scan[1] - scan[0])
        if any(abs(theta - t0) < 1.0 / (64.0 * span) for t0 in thetas):
            break
        thetas.append(theta)
        design = design_for(thetas, xa)
        sol, *_ = np.linalg.lstsq(design, ha, rcond=None)
        resid = ha - design @ sol
        val_err = float(np.max(np.abs(hv - design_for(thetas, xv) @ sol)))
        if val_err < best_err:
            best_err = val_err
            best = (list(thetas), sol.copy())
        if float(np.max(np.abs(resid))) < 1e-6 * hmax:
            break
    if best is None:
        return lhs
    thetas, sol = best

    def model(x: np.ndarray) -> np.ndarray:
        out = design_for(thetas, x) @ sol
        return out / x**2

    # Continue the trapezoid sum with the model: half weight at the data
    # edges (already half-weighted in `lhs`), full weight beyond, with the
    # cutoff pushed out by Richardson (2 S(2 X_far) - S(X_far) cancels the
    # leading 1/X_far truncation term of the 1/x^2 tail).
    x_far = 4096.0
    extra = np.zeros(target.size, dtype=complex)
    for sign in (1.0, -1.0):
        edge = sign * span
        extra += 0.5 * h * model(np.array([edge])) * np.exp(
            -2j * np.pi * target * edge
        )
        n_lo = int(round(span / h)) + 1
        n_mid = int(round(x_far / h))
        n_hi = 2 * n_mid
        for lo, hi, weight in ((n_lo, n_mid, 1.0), (n_mid + 1, n_hi, 2.0)):
            n = np.arange(lo, hi + 1)
            for c0 in range(0, n.size, 40000):
                xx = sign * n[c0 : c0 + 40000] * h
                extra += weight * h * (
                    np.exp(-2j * np.pi * np.outer(target, xx)) @ model(xx)
                )
    return lhs + extra


def _inverse_band(omega_axis: UniformGrid, values: np.ndarray, t: np.ndarray) -> np.ndarray:
    wts = trapezoid_weights(omega_axis.count, omega_axis.step)
    return np.exp(2j * np.pi * np.outer(t, omega_axis.points())) @ (wts * values)


# -- sign retrieval ---------------------------------------------------------

_DIP_REL = 1e-2  # local minima of q below this (rel. local max) are candidates
_ZERO_REL = 1e-4  # below this (rel. local max) the candidate is a zero


def _refine_minimum(q_samples: np.ndarray, spacing: float, t_grid: np.ndarray,
                    qf: np.ndarray, i: int) -> tuple[float, float]:
    """Parabolic refinement of a local minimum of q around grid index i."""
    denom = qf[i + 1] - 2.0 * qf[i] + qf[i - 1]
    if denom > 0:
        shift = 0.5 * (qf[i - 1] - qf[i + 1]) / denom
        shift = float(np.clip(shift, -1.0, 1.0))
    else:
        shift = 0.0
    step = t_grid[1] - t_grid[0]
    t_star = float(t_grid[i] + shift * step)
    q_star = float(wsk_interpolate(q_samples, spacing, t_star).real)
    return t_star, q_star


def _optimize_free_signs(
    gram: np.ndarray,
    base_flip: np.ndarray,
    free_idx: list[int],
    restarts: int = 64,
) -> np.ndarray:
    """Minimize the out-of-band energy over the free sign bits.

    The forced flips fix the sign of every segment up to one unknown factor
    per block of segments between consecutive free boundaries, so the search
    reduces to tau in {-1,+1}^(nfree+1) (first block fixed +) minimizing the
    quadratic form tau^T M tau with M the gram matrix pushed through the
    block map.  Iterated conditional modes (greedy single-bit descent) from
    deterministic random starts finds the minimizer reliably because the
    gram matrix is near-diagonal for well-separated segments.
    """
    nb = base_flip.size
    nseg = nb + 1
    forced_flip = base_flip.copy()
    forced_flip[free_idx] = 0
    # per-segment sign factor coming from the forced flips alone
    pfix = 1.0 - 2.0 * (np.concatenate([[0], np.cumsum(forced_flip)]) % 2)
    is_free = np.zeros(nb, dtype=int)
    is_free[free_idx] = 1
    blk = np.concatenate([[0], np.cumsum(is_free)])  # block of each segment
    nblk = len(free_idx) + 1
    bmap = np.zeros((nseg, nblk))
    bmap[np.arange(nseg), blk] = pfix
    m = bmap.T @ gram @ bmap
    rng = np.random.default_rng(0)
    starts = [np.ones(nblk), (-1.0) ** np.arange(nblk)]
    # spectral relaxation: the lowest eigenvector of M is the continuous
    # minimizer; its sign pattern is a strong start
    evals, evecs = np.linalg.eigh(m)
    v = evecs[:, 0]
    sv = np.where(v >= 0.0, 1.0, -1.0)
    starts.append(sv * sv[0])
    for _ in range(restarts):
        starts.append(1.0 - 2.0 * rng.integers(0, 2, size=nblk).astype(float))
    best_e = np.inf
    best_tau = starts[0]
    for tau in starts:
        tau = tau.copy()
        tau[0] = 1.0
        e = float(tau @ m @ tau)
        # greedy descent over two move families: flipping one block, and
        # flipping every block from b on (the latter is a single sign-flip
        # toggled at one free boundary, the natural move in flip space)
        for _ in range(500):
            changed = False
            for b in range(1, nblk):
                mt = m @ tau
                d_block = -4.0 * tau[b] * float(mt[b]) + 4.0 * m[b, b]
                if d_block < -1e-15 * (abs(e) + 1.0):
                    tau[b] = -tau[b]
                    e += d_block
                    changed = True
                    mt = m @ tau
                ts = tau.copy()
                ts[b:] = -ts[b:]
                es = float(ts @ m @ ts)
                if es < e - 1e-15 * (abs(e) + 1.0):
                    tau = ts
                    e = es
                    changed = True
            if not changed:
                break
        if e < best_e:
            best_e = e
            best_tau = tau.copy()
    return bmap @ best_tau


def sign_retrieve(
    s: MagnitudeSamples,
    n_interp: int = 16,
    max_enumeration: int = 20,
    noise_floor: float = 0.0,
    optimize_free: bool = True,
) -> SignRetrieval:
    """Recover u = +-|u| from |u(n/(4B))| up to a global sign.

    q = u^2 lies in the Paley-Wiener class of bandwidth 2B, so the 4B-rate
    samples determine it through the Whittaker-Shannon series.  Zeros of q
    split the window into segments; within each segment u = +-sqrt(q).  When
    the zero count is at most `max_enumeration`, every sign pattern is tried
    and the one with least energy beyond the band [-B, B] wins (first segment
    fixed +).  With more zeros, each zero is classified by the local growth
    of q (quadratic for a simple zero of u, where the sign must flip;
    quartic for a grazing zero, where it must not); the ambiguous bits are
    enumerated when at most `max_enumeration` remain, and otherwise the
    out-of-band energy is minimized over them by deterministic multistart
    coordinate descent on the reduced block signs (`optimize_free=False`
    restores the strict behaviour and raises TooManySegments instead).

    `noise_floor` is an additive error bound on q (e.g. the magnitude of its
    negative excursions when q comes from a deconvolution).  Dips within a
    few floors of zero still count as zeros, but when the floor swamps the
    zero threshold the crossing/grazing shapes are locally indistinguishable
    and the bit is left free for the energy criterion.
    """
    vals = np.asarray(s.values, dtype=float)
    if np.any(vals < -1e-9):
        raise NoisyMagnitudes("magnitude samples must be nonnegative")
    vals = np.clip(vals, 0.0, None)
    q = vals**2
    delta = s.spacing
    half = s.half_count
    step = delta / n_interp
    fine = UniformGrid(-half * delta, step, 2 * half * n_interp + 1)
    t = fine.points()
    qmax = float(np.max(q))
    if qmax == 0.0:
        zeros = np.zeros(t.size)
        return SignRetrieval(fine, zeros, np.zeros(vals.size), (), 1, 0)
    qf = wsk_interpolate(q, delta, t).real
    mf = np.sqrt(np.clip(qf, 0.0, None))

    interior = np.arange(1, t.size - 1)
    is_min = (qf[interior] <= qf[interior - 1]) & (qf[interior] <= qf[interior + 1])
    # a dip only counts relative to the local amplitude of q, otherwise the
    # 1/t^2 tail of the signal floods the candidate list
    nbh = 4 * n_interp  # one sample period to each side
    local_max = np.array([
        np.max(qf[max(0, i - nbh): i + nbh + 1]) for i in interior
    ])
    cand = interior[is_min & (qf[interior] < _DIP_REL * np.maximum(local_max, 1e-300))]

    boundaries = []  # (t*, forced_flip: bool | None)
    dprobe = delta / 4.0
    for i in cand:
        t_star, q_star = _refine_minimum(q, delta, t, qf, int(i))
        qloc = float(np.max(qf[max(0, int(i) - nbh): int(i) + nbh + 1]))
        if q_star > _DIP_REL * qloc:
            continue
        if qloc < 9.0 * noise_floor:
            # the whole neighborhood sits at the error floor: q carries no
            # usable shape information, so the bit stays free for the energy
            # criterion (the affected amplitudes are ~sqrt(floor) anyway)
            boundaries.append((t_star, None))
            continue
        probes = wsk_interpolate(q, delta, np.array(
            [t_star - 2 * dprobe, t_star - dprobe, t_star + dprobe, t_star + 2 * dprobe]
        )).real
        near = probes[1] + probes[2]
        far = probes[0] + probes[3]
        if q_star >= max(_ZERO_REL * qloc, 3.0 * noise_floor):
            forced = None  # dips without a zero: let the energy decide
        elif _ZERO_REL * qloc <= 3.0 * noise_floor:
            # the dip bottoms out inside the error floor, where a crossing
            # and a deep graze are locally indistinguishable
            forced = None
        elif near <= 1e-6 * qloc:
            forced = True  # too flat to classify; simple crossing is generic
        else:
            ratio = far / near
            if ratio < 6.0:
                forced = True  # quadratic zero of q: u crosses, sign flips
            elif ratio > 10.0:
                forced = False  # quartic zero: u grazes, sign keeps
            else:
                forced = None
        boundaries.append((t_star, forced))
    boundaries.sort(key=lambda bf: bf[0])
    # merge refinements that collapsed onto the same zero
    merged = []
    for t_star, forced in boundaries:
        if merged and t_star - merged[-1][0] < step:
            continue
        merged.append((t_star, forced))
    boundaries = merged
    nb = len(boundaries)

    if nb <= max_enumeration:
        free_idx = list(range(nb))
        base_flip = np.zeros(nb, dtype=int)
    else:
        free_idx = [j for j, (_, forced) in enumerate(boundaries) if forced is None]
        if len(free_idx) > max_enumeration and not optimize_free:
            raise TooManySegments(
                f"{nb} zeros with {len(free_idx)} ambiguous ones exceed the "
                f"enumeration cap {max_enumeration}"
            )
        base_flip = np.array([1 if forced else 0 for (_, forced) in boundaries], dtype=int)

    z = np.array([b[0] for b in boundaries])
    nseg = nb + 1

    if nb == 0:
        signs_best = np.ones(1)
    else:
        # out-of-band energy as a quadratic form in the segment signs
        sub = 4  # energy grid may be coarser than the zero-location grid
        t_e = t[::sub]
        mf_e = mf[::sub]
        seg_e = np.searchsorted(z, t_e)
        band = s.band
        span = half * delta
        dxi = 1.0 / (2.0 * span)
        xi_half = np.arange(1.1 * band, 2.5 * band, dxi)
        xi = np.concatenate([-xi_half[::-1], xi_half])
        indic = (seg_e[:, None] == np.arange(nseg)[None, :]).astype(float)
        mtime = indic * mf_e[:, None]
        kernel = np.exp(-2j * np.pi * np.outer(xi, t_e)) * (step * sub)
        fg = kernel @ mtime
        gram = (fg.conj().T @ fg).real * dxi

        if len(free_idx) <= max_enumeration:
            npat = 1 << len(free_idx)
            bits = (np.arange(npat)[:, None] >> np.arange(len(free_idx))[None, :]) & 1
            flips = np.tile(base_flip, (npat, 1))
            if free_idx:
                flips[:, free_idx] = bits
            csum = np.concatenate(
                [np.zeros((npat, 1), dtype=int), np.cumsum(flips, axis=1)], axis=1
            )
            signs = 1.0 - 2.0 * (csum % 2)
            energies = np.einsum("ij,jk,ik->i", signs, gram, signs)
            signs_best = signs[int(np.argmin(energies))]
        else:
            signs_best = _optimize_free_signs(gram, base_flip, free_idx)

    seg_f = np.searchsorted(z, t) if nb else np.zeros(t.size, dtype=int)
    sigma_f = signs_best[seg_f]
    t_samp = delta * np.arange(-half, half + 1)
    seg_s = np.searchsorted(z, t_samp) if nb else np.zeros(t_samp.size, dtype=int)
    sigma_s = signs_best[seg_s]
    return SignRetrieval(
        grid=fine,
        values=sigma_f * mf,
        signed_samples=sigma_s * vals,
        boundaries=tuple(float(zz) for zz in z),
        segment_count=nseg,
        enumerated_bits=len(free_idx),
    )


# -- anchor and phase chain -------------------------------------------------

def select_anchor(
    grid: UniformGrid,
    mag: np.ndarray,
    c: float,
    k: int | None = None,
    offsets: int = 64,
) -> tuple[float, float]:
    """Offset t0 in [0, c) whose lattice t0 + c*Z stays farthest from zero.

    Returns (t0, kappa) with kappa the achieved minimum of |f| over the
    lattice |n| <= k.  Existence of a good offset is guaranteed for nonzero
    bandlimited f; this scans a finite set of candidates.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    if k is None:
        k = int(np.ceil(8.0 / c))
    t = grid.points()
    n = np.arange(-k, k + 1)
    cands = c * np.arange(offsets) / offsets
    lat = cands[:, None] + c * n[None, :]
    vals = np.interp(lat.ravel(), t, mag).reshape(lat.shape)
    # lattice points outside the measured span carry no information; do not
    # let the edge-clamped interpolant veto an offset
    vals = np.where((lat >= t[0]) & (lat <= t[-1]), vals, np.inf)
    mins = vals.min(axis=1)
    best = int(np.argmax(mins))
    kappa = float(mins[best])
    if kappa < 1e-6 * float(np.max(mag, initial=0.0)) or np.max(mag, initial=0.0) == 0.0:
        raise NoAnchor("every scanned lattice offset hits a near-zero of |f|")
    return float(cands[best]), kappa


def propagate_phase(
    mag_lattice: np.ndarray,
    r: CrossCorrelationSlice,
    t0: float,
    k: int,
    kappa: float | None = None,
) -> np.ndarray:
    """Chain phases along the lattice t0 + c*Z from the anchor outward.

    The anchor value is fixed real-positive (the global phase is not
    recoverable); then f(t0+(n+1)c) = r(t0+(n+1)c) / conj(f(t0+nc)) forward
    and f(t0-(n+1)c) = conj(r(t0-nc) / f(t0-nc)) backward.  Any divisor with
    modulus below kappa/2 aborts with UnstableChain.
    """
    c = r.c
    if r.t_axis.count != 2 * k + 1 or abs(r.t_axis.step - c) > 1e-12:
        raise ValueError("r must be sampled on the lattice t0 + c*[-k..k]")
    if abs(r.t_axis.start - (t0 - k * c)) > 1e-9:
        raise ValueError("r lattice must start at t0 - k*c")
    mag_lattice = np.asarray(mag_lattice, dtype=float)
    if mag_lattice.shape != (2 * k + 1,):
        raise ValueError("mag_lattice length must be 2k+1")
    if kappa is None:
        kappa = float(np.min(mag_lattice))
    out = np.zeros(2 * k + 1, dtype=complex)
    out[k] = mag_lattice[k]
    for j in range(k, 2 * k):
        denom = np.conj(out[j])
        if abs(denom) < kappa / 2.0:
            raise UnstableChain(f"divisor at lattice index {j - k} below kappa/2")
        out[j + 1] = r.values[j + 1] / denom
    for j in range(k, 0, -1):
        if abs(out[j]) < kappa / 2.0:
            raise UnstableChain(f"divisor at lattice index {j - k} below kappa/2")
        out[j - 1] = np.conj(r.values[j] / out[j])
    return out


# -- pipelines --------------------------------------------------------------

def _subsampled_axis(axis: UniformGrid, stride: int) -> UniformGrid:
    count = (axis.count - 1) // stride + 1
    return UniformGrid(axis.start, axis.step * stride, count)


def _grid_residual(f_callable, w: WindowSpec, m: MagnitudeGrid, band: float,
                   stride: int | None = None) -> float:
    if stride is None:
        stride = max(8, (m.x_axis.count - 1) // 128)
    sub_x = _subsampled_axis(m.x_axis, stride)
    quad = default_quadrature(w, band)
    field = stft_grid(f_callable, w, sub_x, m.omega_axis, quad)
    ref = m.values[::stride, :]
    norm = float(np.linalg.norm(ref))
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(np.abs(field.values) - ref) / norm)


def reconstruct_real_full(m: MagnitudeGrid, w: WindowSpec, band: float) -> ReconstructionReport:
    """Full-grid magnitudes of a real signal -> signal up to global sign.

    A f(0, .) = F(|f|^2) is read off the measurements, inverted to |f|^2,
    clamped, rooted, and handed to sign retrieval at the 4B sample rate.
    """
    # the recovered correlation is piecewise linear in omega with breakpoints
    # off the grid, so the trapezoid inversion error scales like the square of
    # the omega step; B/256 keeps it ~1e-4 relative
    om_axis = UniformGrid.from_span(-2.0 * band, 2.0 * band, band / 256.0)
    slice0 = recover_af_slice(m, w, 0.0, om_axis)
    delta = 1.0 / (4.0 * band)
    half_n = 128
    t_samp = delta * np.arange(-half_n, half_n + 1)
    q = _inverse_band(om_axis, slice0.values, t_samp)
    peak = float(np.max(np.abs(q)))
    if peak > 0 and float(np.max(np.abs(q.imag))) > 1e-6 * peak:
        raise NotRealConsistent("recovered |f|^2 has a non-negligible imaginary part")
    qr = q.real
    clamp_mass = float(np.sum(np.clip(-qr, 0.0, None)) * delta)
    # additive error floor of the recovered q: the slice's own noise estimate,
    # or the deepest negative excursion of q (the truth is nonnegative),
    # whichever is larger
    noise_floor = max(float(max(0.0, -np.min(qr))), slice0.noise_bound)
    qr = np.clip(qr, 0.0, None)
    s = MagnitudeSamples(band=band, values=np.sqrt(qr))
    sr = sign_retrieve(s, noise_floor=noise_floor)
    out = default_grid(band)
    vals = wsk_interpolate(sr.signed_samples, delta, out.points())
    vals = np.asarray(vals, dtype=complex)

    def f_hat(t):
        return wsk_interpolate(sr.signed_samples, delta, t)

    residual = _grid_residual(f_hat, w, m, band)
    diag = (
        ("floored_bins", float(slice0.floored_bins)),
        ("clamp_mass", clamp_mass),
        ("segments", float(sr.segment_count)),
        ("enumerated_bits", float(sr.enumerated_bits)),
    )
    return ReconstructionReport(out, vals, "global_sign", residual, diag)


def reconstruct_real_sampled(
    s: MagnitudeSamples, w: WindowSpec, band: float, floor: float = 1e-6
) -> ReconstructionReport:
    """4B-rate magnitude samples of u = f * w^# -> f up to global sign.

    Sign retrieval fixes u up to sign; the spectrum F u follows exactly from
    the 4B-rate samples (u is bandlimited to B), and F f = F u / conj(F w)
    on (-B, B) with floor regularization (floor is relative to the in-band
    maximum of |F w|; more than 20% floored bins raises
    SpectrumFloorExceeded).
    """
    if not w.is_real():
        raise WindowNotReal("the sampled pipeline requires a real-valued window")
    delta = s.spacing
    half = s.half_count
    n_idx = np.arange(-half, half + 1)
    nxi = 2048
    xi = np.linspace(-band, band, nxi + 1)
    fw = np.atleast_1d(window_ft(w, xi))
    absfw = np.abs(fw)
    mx = float(np.max(absfw))
    mask = absfw >= floor * mx
    floored = int(np.count_nonzero(~mask))
    if floored > 0.2 * xi.size:
        raise SpectrumFloorExceeded(
            f"{floored}/{xi.size} in-band bins of |F w| below the floor"
        )
    sr = sign_retrieve(s)
    fu = delta * (np.exp(-2j * np.pi * np.outer(xi, n_idx * delta)) @ sr.signed_samples)
    ff = np.zeros(xi.size, dtype=complex)
    ff[mask] = fu[mask] / np.conj(fw[mask])
    wts = simpson_weights(nxi + 1, 2.0 * band / nxi)

    def f_hat(t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        return np.exp(2j * np.pi * np.outer(t_arr, xi)) @ (wts * ff)

    out = default_grid(band)
    vals = f_hat(out.points())
    vals = np.asarray(vals.real, dtype=complex)  # f is real up to global sign

    # self-consistency on a subsample of the input sample line
    stride = 16
    sub_n = n_idx[::stride]
    quad = default_quadrature(w, band)
    x_ax = UniformGrid(float(sub_n[0]) * delta, delta * stride, sub_n.size)
    om_ax = UniformGrid(0.0, 1.0, 1)
    field = stft_grid(lambda t: f_hat(t), w, x_ax, om_ax, quad)
    ref = np.asarray(s.values, dtype=float)[::stride]
    norm = float(np.linalg.norm(ref))
    residual = 0.0 if norm == 0 else float(
        np.linalg.norm(np.abs(field.values[:, 0]) - ref) / norm
    )
    diag = (
        ("floored_bins", float(floored)),
        ("segments", float(sr.segment_count)),
        ("enumerated_bits", float(sr.enumerated_bits)),
    )
    return ReconstructionReport(out, vals, "global_sign", residual, diag)


def reconstruct_complex_two_slices(
    m: MagnitudeGrid, w: WindowSpec, band: float, c: float
) -> ReconstructionReport:
    """Two ambiguity slices (x = 0 and x = c <= 1/(2B)) -> f up to phase.

    |f| comes from the x=0 slice, r_c from the x=c slice; an anchor offset
    and the phase chain fix the lattice values, which the Whittaker-Shannon
    series (valid because c does not exceed the Nyquist step 1/(2B))
    interpolates to the output grid.  The chained moduli are replaced by the
    directly recovered |f| to stop error compounding along the recursion.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    if c > 1.0 / (2.0 * band) + 1e-12:
        raise CUpsampleBound(
            f"slice separation c={c} exceeds 1/(2B)={1.0 / (2.0 * band)}"
        )
    # the recovered correlation is piecewise linear in omega with breakpoints
    # off the grid, so the trapezoid inversion error scales like the square of
    # the omega step; B/256 keeps it ~1e-4 relative
    om_axis = UniformGrid.from_span(-2.0 * band, 2.0 * band, band / 256.0)
    slice0 = recover_af_slice(m, w, 0.0, om_axis)
    slicec = recover_af_slice(m, w, c, om_axis)
    fine = UniformGrid.from_span(-32.0 / band, 32.0 / band, 1.0 / (64.0 * band))
    q = _inverse_band(om_axis, slice0.values, fine.points()).real
    mag = np.sqrt(np.clip(q, 0.0, None))
    k = int(np.ceil(16.0 * band / c))
    t0, kappa = select_anchor(fine, mag, c, k)
    lat_axis = UniformGrid(t0 - k * c, c, 2 * k + 1)
    lat_t = lat_axis.points()
    mag_lat = np.sqrt(np.clip(_inverse_band(om_axis, slice0.values, lat_t).real, 0.0, None))
    oms = om_axis.points()
    rhat = np.exp(-1j * np.pi * c * oms) * slicec.values
    r = CrossCorrelationSlice(c=c, t_axis=lat_axis, values=_inverse_band(om_axis, rhat, lat_t))
    f_lat = propagate_phase(mag_lat, r, t0, k, kappa=kappa)
    mod = np.abs(f_lat)
    phase = np.where(mod > 0, f_lat / np.where(mod > 0, mod, 1.0), 1.0)
    f_lat = mag_lat * phase

    def f_hat(t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        return wsk_interpolate(f_lat, c, t_arr - t0)

    out = default_grid(band)
    vals = np.asarray(f_hat(out.points()), dtype=complex)
    residual = _grid_residual(f_hat, w, m, band)
    diag = (
        ("anchor_t0", float(t0)),
        ("c", float(c)),
        ("kappa", float(kappa)),
        ("floored_bins", float(slice0.floored_bins + slicec.floored_bins)),
    )
    return ReconstructionReport(out, vals, "global_phase", residual, diag)


def _golden_min(fun, lo: float, hi: float, iters: int = 90) -> tuple[float, float]:
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c1 = b - inv_phi * (b - a)
    c2 = a + inv_phi * (b - a)
    f1, f2 = fun(c1), fun(c2)
    for _ in range(iters):
        if f1 < f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - inv_phi * (b - a)
            f1 = fun(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + inv_phi * (b - a)
            f2 = fun(c2)
    x = 0.5 * (a + b)
    return x, fun(x)


def _min_abs_ambiguity(w: WindowSpec, x: float, om_max: float, n_grid: int = 1024) -> float:
    """min over |omega| <= om_max of |A w(x, omega)|, grid + local refinement."""
    oms = np.linspace(-om_max, om_max, n_grid + 1)
    a = np.abs(np.atleast_1d(window_ambiguity(w, x, oms)))
    best = min(float(a[0]), float(a[-1]))
    interior = np.arange(1, oms.size - 1)
    mins = interior[(a[interior] <= a[interior - 1]) & (a[interior] <= a[interior + 1])]

    def fun(om):
        return abs(window_ambiguity(w, x, float(om)))

    for i in mins:
        _, val = _golden_min(fun, oms[i - 1], oms[i + 1])
        best = min(best, float(val))
    return best


def reconstruct_complex_strip(
    m: MagnitudeGrid,
    w: WindowSpec,
    band: float,
    scan: UniformGrid | None = None,
) -> ReconstructionReport:
    """Strip hypothesis -> two-slice pipeline at an admissible offset.

    Checks that |A w(0, .)| stays away from zero on [-2B, 2B] (else
    StripNotFound), estimates the largest scanned x at which the slice
    minimum stays above half the x=0 minimum, and delegates to the two-slice
    pipeline at c = min(delta, 1/(2B)).
    """
    if scan is None:
        scan = UniformGrid(1.0 / 128.0, 1.0 / 128.0, 128)
    om_max = 2.0 * band
    dhat = _min_abs_ambiguity(w, 0.0, om_max)
    peak = float(np.max(np.abs(np.atleast_1d(
        window_ambiguity(w, 0.0, np.linspace(-om_max, om_max, 513))
    ))))
    if peak == 0.0 or dhat < 1e-6 * peak:
        raise StripNotFound(
            "|A w(0, .)| vanishes (or nearly so) inside [-2B, 2B]"
        )
    delta_est = 0.0
    for x in scan.points():
        if _min_abs_ambiguity(w, float(x), om_max) >= dhat / 2.0:
            delta_est = float(x)
        else:
            break
    if delta_est <= 0.0:
        raise StripNotFound("no positive strip width survives the scan")
    c = min(delta_est, 1.0 / (2.0 * band))
    rep = reconstruct_complex_two_slices(m, w, band, c)
    diag = (("delta_hat", float(dhat)), ("delta", delta_est)) + rep.diagnostics
    return ReconstructionReport(rep.grid, rep.signal, rep.resolved_up_to, rep.residual, diag)


def report_to_json(report: ReconstructionReport) -> str:
    t = report.grid.points()
    doc = {
        "schema": 1,
        "resolved_up_to": report.resolved_up_to,
        "residual": report.residual,
        "anchor_t0": report.diagnostic("anchor_t0"),
        "c": report.diagnostic("c"),
        "floored_bins": int(report.diagnostic("floored_bins", 0.0)),
        "diagnostics": {k: v for k, v in report.diagnostics},
        "signal": [
            {"t": float(tt), "re": float(v.real), "im": float(v.imag)}
            for tt, v in zip(t, report.signal)
        ],
    }
    return json.dumps(doc, sort_keys=True)
