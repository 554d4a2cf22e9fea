"""Exception hierarchy."""


class HypercurrentError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HypercurrentError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ConvergenceError(HypercurrentError, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance.

    ``value`` and ``error`` carry the best estimate obtained before the
    subdivision budget ran out.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class DegenerateCurrentError(HypercurrentError, ArithmeticError):
    """The current has zero variance, so its SNR is undefined."""


class DegenerateCorrelationError(HypercurrentError, ArithmeticError):
    """Energy and particle fluctuations are (numerically) proportional."""


class EquilibriumError(HypercurrentError, ValueError):
    """The operation is undefined at equilibrium (no gradients)."""


class AnalyticityError(HypercurrentError, ArithmeticError):
    """Counting field outside the region where the CGF logarithm is real."""


class ConfigError(HypercurrentError, ValueError):
    """Invalid sweep / point configuration."""
