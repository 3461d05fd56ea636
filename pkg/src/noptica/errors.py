"""Exception types raised by noptica."""


class NopticaError(Exception):
    """Base class for all noptica errors."""


class DomainError(NopticaError, ValueError):
    """An argument lies outside the domain of an operation."""


class TotalReflectionError(DomainError):
    """Beam energy below the critical energy of the medium."""


class ExtrapolationError(DomainError):
    """Query outside the range of tabulated data."""


class ModelValidityError(DomainError):
    """A structure model produced an unphysical value (e.g. negative S)."""


class GridError(DomainError):
    """Incompatible or degenerate sampling grid."""


class SmallAngleValidityError(DomainError):
    """Angle too large for the leading-order small-angle inversion."""


class NumericError(NopticaError, ArithmeticError):
    """Quadrature failure, NaN, or similar numerical breakdown."""


class StepSizeError(NumericError):
    """Integrator time step violates the stability guard."""


class ConfigError(NopticaError):
    """Invalid run configuration."""
