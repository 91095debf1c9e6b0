"""STFT phase retrieval for bandlimited signals.

Exact piecewise-constant-spectrum signals, a window gallery with closed-form
ambiguity functions, magnitude measurement simulation, verification residuals
for the ambiguity-function relation and band support, and four constructive
reconstruction pipelines (real full-grid, real sampled, complex two-slice,
complex strip), all reachable from the `pwphase` CLI.
"""

from .errors import (
    BadEpsilon,
    BadProbe,
    CUpsampleBound,
    IndexTooLarge,
    NoAnchor,
    NoisyMagnitudes,
    NotRealConsistent,
    PwPhaseError,
    SpectrumFloorExceeded,
    StripNotFound,
    TooManySegments,
    TruncationWarning,
    UnstableChain,
    VanishingAmbiguity,
    WindowNotReal,
)
from .grids import (
    ComplexField2D,
    QuadratureScheme,
    UniformGrid,
    fourier_on_grid,
    simpson_weights,
    sinc,
    trapezoid_weights,
    wsk_interpolate,
)
from .signals import (
    PWSignal,
    SpectrumPiece,
    ambiguity_exact,
    counterexample_pair,
    default_grid,
    distance_up_to_phase,
    eval_spectrum,
    eval_time,
    random_pw_signal,
    signal_from_json,
    signal_to_json,
)
from .windows import (
    AmbiguitySlice,
    WindowSpec,
    ambiguity_quadrature,
    ambiguity_slice,
    hermite_eval,
    laguerre_eval,
    window_ambiguity,
    window_eval,
    window_from_dict,
    window_ft,
    window_to_dict,
)
from .transforms import (
    MagnitudeGrid,
    MagnitudeSamples,
    ambiguity_grid,
    ambiguity_relation_residual,
    band_support_residual,
    default_quadrature,
    default_tf_axes,
    magnitude_measurement,
    read_magnitude_grid_csv,
    read_samples_csv,
    recon_axes,
    stft_grid,
    write_complex_grid_csv,
    write_magnitude_grid_csv,
    write_samples_csv,
)
from .recon import (
    CrossCorrelationSlice,
    ReconstructionReport,
    SignRetrieval,
    propagate_phase,
    recover_af_slice,
    reconstruct_complex_strip,
    reconstruct_complex_two_slices,
    reconstruct_real_full,
    reconstruct_real_sampled,
    report_to_json,
    select_anchor,
    sign_retrieve,
)

__version__ = "0.1.0"
