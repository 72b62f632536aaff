"""Exception hierarchy shared by all modules."""


class CQEDError(Exception):
    """Base class for library errors."""


class ParameterDomainError(CQEDError, ValueError):
    """A physical parameter is outside its valid domain."""


class ConvergenceError(CQEDError, RuntimeError):
    """An iterative solver failed to converge.

    Attributes
    ----------
    residual : float
        Last residual reached before giving up.
    """

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class UnstablePotentialError(ParameterDomainError):
    """The linearized qubit potential has non-positive curvature."""


class NumericalError(CQEDError, RuntimeError):
    """A numerical routine failed (eigensolver, quadrature, stepper)."""


class ConfigError(CQEDError, ValueError):
    """Invalid configuration. ``errors`` holds every violation found."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class InfeasibleDesignError(CQEDError, RuntimeError):
    """No protocol design satisfies the constraints."""

    def __init__(self, message, binding_constraint=""):
        super().__init__(message)
        self.binding_constraint = binding_constraint
