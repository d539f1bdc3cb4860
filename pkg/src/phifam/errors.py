"""Exception types shared across the package."""

from __future__ import annotations


class PhiFamError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(PhiFamError):
    """Mismatched shapes/spaces, malformed files, or inconsistent inputs."""


class DomainError(PhiFamError):
    """A value lies outside the mathematical domain of an operation."""


class SolverError(PhiFamError):
    """A bracketing or bisection solve failed to converge.

    Carries the last bracket and iteration count as diagnostics.
    """

    def __init__(self, message: str, *, bracket: tuple[float, float] | None = None,
                 iterations: int | None = None):
        if bracket is not None:
            message = f"{message} [bracket={bracket!r}, iterations={iterations!r}]"
        super().__init__(message)
        self.bracket = bracket
        self.iterations = iterations


class PhiOverflowError(PhiFamError):
    """A generator value saturated to +inf where a finite number was required.

    Saturated values are sentinels, never numbers: any integration that
    meets one raises this instead of propagating +inf silently.
    """
