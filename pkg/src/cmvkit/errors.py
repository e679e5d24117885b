"""Exception types shared across the package."""

__all__ = [
    "CmvError",
    "DomainError",
    "ValidationError",
    "SingularShiftError",
    "NonConvergenceError",
    "StationaryPointError",
    "PoleError",
    "BranchPointError",
    "DegenerateCombinationError",
]


class CmvError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CmvError, ValueError):
    """An argument lies outside the operation's documented domain."""


class ValidationError(CmvError, ValueError):
    """Supplied or generated data violates a structural invariant."""


class SingularShiftError(CmvError, ArithmeticError):
    """A shifted linear system is numerically singular (shift at or near an eigenvalue)."""


class NonConvergenceError(CmvError, ArithmeticError):
    """An iteration failed to converge; ``partial`` carries whatever was computed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class StationaryPointError(CmvError, ArithmeticError):
    """Newton refinement hit a point with vanishing derivative."""


class PoleError(CmvError, ArithmeticError):
    """An approximant was evaluated at (or too near) one of its poles; ``at`` is the point."""

    def __init__(self, message, at=None):
        super().__init__(message)
        self.at = at


class BranchPointError(CmvError, ArithmeticError):
    """Branch selection is ambiguous (evaluation too close to a branch point)."""


class DegenerateCombinationError(CmvError, ArithmeticError):
    """A polynomial combination degenerated (vanishing reversed value on the circle)."""
