"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A map or experiment parameter is outside its admissible range."""


class DomainError(ValueError):
    """A point lies outside the domain of the map or function."""


class CalibrationError(ValueError):
    """A calibrated map identity (S(0)=S(L)=0, S(x_crit)=L) fails beyond tolerance."""


class KinkError(ValueError):
    """Derivative requested at a point where the map is not differentiable."""


class PreconditionError(RuntimeError):
    """An operation's mathematical precondition does not hold for the input."""


class ConvergenceError(RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ExtinctionError(RuntimeError):
    """The normalizing integral of a density flow vanished (mass left the domain)."""


class InstabilityError(RuntimeError):
    """A time stepper produced values beyond its blow-up guard."""


class FactorizationError(RuntimeError):
    """A covariance matrix failed its symmetric factorization tolerance."""


class OrbitCollapseWarning(RuntimeWarning):
    """A floating-point orbit revisited a point exactly and is periodic."""
