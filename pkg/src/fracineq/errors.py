"""Exception types raised across the package."""


class FracIneqError(Exception):
    """Base class for all package errors."""


class DomainError(FracIneqError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """The requested evaluation hits a genuine singularity (e.g. (b-x)^(1-alpha) at x=b)."""


class PreconditionError(FracIneqError, ValueError):
    """An operation's hypothesis is not met (non-convex f, missing bound, ...)."""


class CatalogError(FracIneqError, KeyError):
    """Unknown or malformed test-function catalog name."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnsupportedError(FracIneqError, ValueError):
    """Input is valid mathematically but beyond what the implementation supports."""


class ConfigError(FracIneqError, ValueError):
    """Malformed sweep configuration. ``key`` names the offending entry."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class ConvergenceError(FracIneqError, RuntimeError):
    """Quadrature did not reach its tolerance within the subdivision budget."""

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate
