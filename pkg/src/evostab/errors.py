"""Exception taxonomy shared by every evostab module."""


class EvostabError(Exception):
    """Base class for all library errors."""


class InputError(EvostabError, ValueError):
    """Malformed argument: dimension mismatch, empty grid, bad constant."""


class OrderingError(InputError):
    """Time arguments violate t >= s >= 0."""


class ConfigError(InputError):
    """A plain-text config file failed to parse or validate."""


class IntegrationError(EvostabError, RuntimeError):
    """Adaptive ODE propagation failed before reaching the target time."""

    def __init__(self, message: str, last_time: float):
        super().__init__(message)
        self.last_time = last_time


class AccuracyError(EvostabError, ArithmeticError):
    """Estimated quadrature error exceeded the caller's ceiling."""

    def __init__(self, message: str, quad_error: float, ceiling: float):
        super().__init__(message)
        self.quad_error = quad_error
        self.ceiling = ceiling


class DivergenceNotObservedError(EvostabError, ValueError):
    """No search point pushed the growth function above 1."""


class PreconditionError(EvostabError, RuntimeError):
    """An operation ran on data whose prerequisite check has not passed."""
