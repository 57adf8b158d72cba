"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented invariant.

    ``field`` carries the dotted name of the offending field when known.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class DomainError(ValueError):
    """Argument outside the supported range of a model or special function."""


class UnsupportedModeError(ValueError):
    """Requested a mode family for which field profiles are not implemented."""


class QuadratureError(ArithmeticError):
    """Quadrature failed to converge within its subdivision cap."""

    def __init__(self, message, estimate, error_bound):
        self.estimate = estimate
        self.error_bound = error_bound
        super().__init__(f"{message} (last estimate {estimate!r}, error bound {error_bound!r})")


class FitError(ArithmeticError):
    """A fit could not be performed on the supplied data."""


class OptimizationError(ArithmeticError):
    """Objective evaluation produced a non-finite value."""

    def __init__(self, message, parameter_value):
        self.parameter_value = parameter_value
        super().__init__(f"{message} at parameter value {parameter_value!r}")
