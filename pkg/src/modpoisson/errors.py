"""Exception types shared across the package."""


class ModPoissonError(Exception):
    """Base class for all library errors."""


class DomainError(ModPoissonError, ValueError):
    """A parameter or argument lies outside the mathematical domain."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a kernel singularity."""


class DivergenceError(DomainError):
    """A series was requested outside its region of convergence."""


class ConstructionError(ModPoissonError, ValueError):
    """A data construction violates its geometric prerequisites."""


class AccuracyError(ModPoissonError, RuntimeError):
    """A quadrature failed to reach the requested tolerance.

    Carries the best value obtained and the achieved error estimate.
    """

    def __init__(self, message, value=None, estimate=None, tolerance=None):
        super().__init__(message)
        self.value = value
        self.estimate = estimate
        self.tolerance = tolerance
