"""Error and warning classes raised across the package."""


class BWHError(Exception):
    """Base class for all errors raised by :mod:`bwh`."""


class ConfigError(BWHError, ValueError):
    pass


class DomainError(BWHError, ValueError):
    """Special function evaluated outside its domain."""


class PhysicsError(BWHError, ValueError):
    """Physically degenerate input (CLI exit code 3)."""


class SingularMedium(PhysicsError):
    """k**2 * alpha * beta == 1, the Beltrami wavenumbers blow up."""


class DecoupledCase(PhysicsError):
    """ky == 0: the coupling constant delta is undefined."""


class AchiralDegenerate(PhysicsError):
    """k1xz**2 == k2xz**2: delta has a vanishing denominator."""


class EvanescentPartialWave(PhysicsError):
    """The in-plane wavenumber squared is not positive."""


class SourcePointSingularity(PhysicsError):
    pass


class BranchPointSingularity(PhysicsError):
    pass


class PoleEvaluation(PhysicsError):
    """Spectral quantity requested exactly at the incident-wave pole."""


class NumericalError(BWHError, ArithmeticError):
    """Numerical tolerance could not be met (CLI exit code 4)."""


class QuadratureFailure(NumericalError):
    pass


class ToleranceNotMet(NumericalError):
    pass


class KernelZeroOnContour(NumericalError):
    pass


class ShadowBoundaryWarning(UserWarning):
    """Pole and saddle point nearly coincide; the simple far-field formula degrades."""
