"""
Error kinds and exceptions raised by the perturbed interpolation library.

Every failure carries an ``ErrorKind`` and a ``detail`` mapping so the CLI can
emit a JSON diagnostic and choose the exit code without string matching.
"""

from enum import Enum
from typing import Any, Dict, Optional


class ErrorKind(str, Enum):
    """Kinds of failures that library operations can report."""

    INVALID_ARGUMENT = "invalid_argument"
    RANGE_VIOLATION = "range_violation"
    CONVERGENCE_FAILURE = "convergence_failure"
    SOLVE_FAILURE = "solve_failure"
    NOT_CERTIFIED = "not_certified"
    POLE_ERROR = "pole_error"
    REDUCTION_FAILURE = "reduction_failure"
    CONSTRUCTION_FAILURE = "construction_failure"
    QUADRATURE_FAILURE = "quadrature_failure"
    KERNEL_POLE = "kernel_pole"
    NOT_IMPLEMENTED = "not_implemented"
    USAGE_ERROR = "usage_error"


# Kinds that mean "the caller asked for something outside the domain"
ARGUMENT_KINDS = frozenset(
    {ErrorKind.INVALID_ARGUMENT, ErrorKind.RANGE_VIOLATION, ErrorKind.USAGE_ERROR}
)


class InterpolationError(Exception):
    """Base class for all library errors.

    Attributes:
        kind: The error kind
        detail: Diagnostic values (best estimate, residual, bound, ...)
    """

    kind: ErrorKind = ErrorKind.INVALID_ARGUMENT

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.detail: Dict[str, Any] = dict(detail or {})

    def to_dict(self) -> Dict[str, Any]:
        """Render the error as a JSON-serializable diagnostic."""
        return {"error": self.kind.value, "message": self.message, "detail": self.detail}


class InvalidArgumentError(InterpolationError, ValueError):
    kind = ErrorKind.INVALID_ARGUMENT


class RangeViolationError(InterpolationError, ValueError):
    kind = ErrorKind.RANGE_VIOLATION


class UsageError(InterpolationError, ValueError):
    kind = ErrorKind.USAGE_ERROR


class PoleError(InterpolationError, ValueError):
    kind = ErrorKind.POLE_ERROR


class KernelPoleError(InterpolationError, ValueError):
    kind = ErrorKind.KERNEL_POLE


class NotImplementedKindError(InterpolationError, NotImplementedError):
    kind = ErrorKind.NOT_IMPLEMENTED


class ConvergenceFailure(InterpolationError, RuntimeError):
    """Raised when an iteration stops before reaching its tolerance.

    The best estimate reached so far is kept in ``detail["best_estimate"]``.
    """

    kind = ErrorKind.CONVERGENCE_FAILURE

    @property
    def best_estimate(self) -> Optional[float]:
        return self.detail.get("best_estimate")


class SolveFailure(InterpolationError, RuntimeError):
    kind = ErrorKind.SOLVE_FAILURE


class NotCertifiedError(InterpolationError, RuntimeError):
    kind = ErrorKind.NOT_CERTIFIED


class ReductionFailure(InterpolationError, RuntimeError):
    kind = ErrorKind.REDUCTION_FAILURE


class ConstructionFailure(InterpolationError, RuntimeError):
    kind = ErrorKind.CONSTRUCTION_FAILURE


class QuadratureFailure(InterpolationError, RuntimeError):
    kind = ErrorKind.QUADRATURE_FAILURE


def exit_code_for(error: InterpolationError) -> int:
    """Map a library error onto the CLI exit code convention (2 usage, 3 math)."""
    return 2 if error.kind in ARGUMENT_KINDS else 3
