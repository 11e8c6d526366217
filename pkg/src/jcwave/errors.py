"""Exception hierarchy shared by every jcwave module."""


class JCWaveError(Exception):
    """Base class for all errors raised by jcwave."""


class ConfigurationError(JCWaveError, ValueError):
    """Invalid grid, model or propagator settings."""


class DimensionError(JCWaveError, ValueError):
    """Wave packets living on different grids were combined."""


class BasisError(JCWaveError, ValueError):
    """A wave packet was given in the wrong channel basis or representation."""


class ResolutionError(JCWaveError, ValueError):
    """The requested state or lattice is not resolved by the grid."""


class GridTooSmallError(ResolutionError):
    """Boundary amplitude exceeded the monitor threshold during propagation."""


class NumericalBlowupError(JCWaveError, FloatingPointError):
    """Non-finite values appeared during stepping or integration."""


class DomainError(JCWaveError, ValueError):
    """Argument outside the mathematical domain of a closed-form result."""


class TruncationError(JCWaveError, ValueError):
    """Number-basis truncation too small for the requested state.

    ``required_nmax`` holds the smallest cutoff that satisfies the tail bound.
    """

    def __init__(self, message, required_nmax):
        super().__init__(message)
        self.required_nmax = required_nmax


class EmptyContourError(JCWaveError, ValueError):
    """Requested energy lies below the minimum of the energy sheet."""


class SamplingError(JCWaveError, ValueError):
    """Time series is not uniformly sampled."""


class MeasurementError(JCWaveError, ValueError):
    """A derived quantity (peak, revival time) could not be extracted from a series."""
