"""Exception types shared across the package."""


class TomoError(Exception):
    """Base class for all package errors."""


class DomainError(TomoError):
    """A point lies outside the chart domain."""


class GeometryError(TomoError):
    """The metric is not symmetric positive definite where evaluated."""


class NormalizationError(TomoError):
    """A vector that must be g-unit is not, beyond tolerance."""


class InputError(TomoError):
    """Inconsistent or malformed inputs (orders, shapes, metadata)."""


class PreconditionError(TomoError):
    """A documented precondition of an operation was violated."""


class ConsistencyError(TomoError):
    """An internal consistency check failed (e.g. output tangency)."""


class TrappedGeodesicError(TomoError):
    """A geodesic failed to exit the domain within the allowed time."""

    def __init__(self, message, start=None, max_time=None):
        super().__init__(message)
        self.start = start
        self.max_time = max_time


class ExitBeforeTimeError(TomoError):
    """The trajectory left the domain before the requested flow time."""

    def __init__(self, message, exit_time):
        super().__init__(message)
        self.exit_time = exit_time


class SolverError(TomoError):
    """An iterative solver failed to converge."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = list(residuals) if residuals is not None else []
