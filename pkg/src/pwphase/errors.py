"""Error vocabulary shared across the package.

Every exception carries a short variant name (its class name) that the CLI
prints verbatim, so scripted callers can match on it.
"""


class PwPhaseError(Exception):
    """Base class for all pwphase errors."""


class BadEpsilon(PwPhaseError):
    """Counterexample epsilon outside (0, 2B)."""


class IndexTooLarge(PwPhaseError):
    """Hermite index beyond the supported cap."""


class BadProbe(PwPhaseError):
    """Band-support probe frequency inside the open band (-2B, 2B)."""


class VanishingAmbiguity(PwPhaseError):
    """Too many in-band bins of the window ambiguity fall below the floor."""


class TooManySegments(PwPhaseError):
    """Sign-pattern enumeration would exceed the configured cap."""


class NoisyMagnitudes(PwPhaseError):
    """Magnitude samples contain values that cannot be magnitudes."""


class NotRealConsistent(PwPhaseError):
    """Recovered |f|^2 has a non-negligible imaginary part."""


class WindowNotReal(PwPhaseError):
    """Sampled pipeline requires a real-valued window."""


class SpectrumFloorExceeded(PwPhaseError):
    """Too many in-band bins of the window spectrum fall below the floor."""


class NoAnchor(PwPhaseError):
    """No lattice offset keeps all lattice magnitudes away from zero."""


class UnstableChain(PwPhaseError):
    """Phase propagation hit a divisor below the safety threshold."""


class CUpsampleBound(PwPhaseError):
    """Slice separation c exceeds 1/(2B); recovery would not be unique."""


class StripNotFound(PwPhaseError):
    """Window ambiguity vanishes somewhere on the x=0 segment."""


class TruncationWarning(UserWarning):
    """Quadrature grid does not capture the integrand support."""
