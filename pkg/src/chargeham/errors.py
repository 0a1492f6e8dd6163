"""Package-specific exceptions."""

from __future__ import annotations


class InfeasibleError(RuntimeError):
    """A constraint problem admits no solution at the requested tolerance."""

    def __init__(self, message: str, best_residual: float | None = None,
                 restarts: int | None = None):
        super().__init__(message)
        self.best_residual = best_residual
        self.restarts = restarts


class CapExceededError(RuntimeError):
    """A requested dense build exceeds the configured Hilbert-space cap."""
