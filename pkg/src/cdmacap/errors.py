"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ParameterRangeError(DomainError):
    """A parameter lies outside the supported (beta, kappa, K) box."""


class ConvergenceError(ArithmeticError):
    """The saddle-point iteration did not reach the requested tolerance."""

    def __init__(self, message, last_iterate, residual, iterations):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
        self.iterations = iterations


class BracketError(ArithmeticError):
    """Bisection bracket does not contain a sign change."""

    def __init__(self, message, lo, hi, value_lo, value_hi):
        super().__init__(message)
        self.lo, self.hi = lo, hi
        self.value_lo, self.value_hi = value_lo, value_hi


class EnumerationSizeError(ValueError):
    """Too many users for exhaustive enumeration."""


class DegenerateStatisticsError(ArithmeticError):
    """Every trial of an ensemble produced zero valid codewords."""

    def __init__(self, message, zero_trials):
        super().__init__(message)
        self.zero_trials = zero_trials
