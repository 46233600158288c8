"""Exception types shared across the package."""


class GasketError(Exception):
    """Base class for all package errors."""


class SequenceError(GasketError, ValueError):
    """Invalid subdivision level or query past the stored prefix."""


class BudgetError(GasketError, RuntimeError):
    """A requested computation exceeds the configured size budget."""


class SolveError(GasketError, RuntimeError):
    """A linear solve failed to reach the requested residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DomainError(GasketError, ValueError):
    """Argument outside the domain of a scale function or measure."""


class RealizationError(GasketError, RuntimeError):
    """Scale realization failed (non-summable input or uncertifiable step)."""
