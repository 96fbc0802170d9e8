"""Error types for the numerics layer, exit-code mapping and error aggregation."""
import logging
from typing import Optional
from datetime import datetime

logger = logging.getLogger(__name__)


class ConicalABError(Exception):
    """Base class for every failure raised by the numerics modules."""
    pass


class DomainError(ConicalABError, ValueError):
    """An argument lies outside the domain an operation is defined on."""
    pass


class SpecialFunctionDomainError(DomainError):
    """Raised by the special-function kernel for unsupported orders or arguments."""
    pass


class PhysicsDomainError(DomainError):
    """Raised when a physical parameter violates a model precondition."""
    pass


class DegenerateChannelError(DomainError):
    """Raised for |j| = 0 channels, where only the Friedrichs extension is offered."""
    pass


class PoleError(ConicalABError):
    """Raised when a formula is evaluated exactly at (or numerically on) a pole."""
    pass


class NoBoundStateError(ConicalABError):
    """Raised when the existence condition of a bound state is violated."""
    pass


class BracketError(ConicalABError):
    """Raised when a root bracket does not enclose a sign change."""
    pass


class NonConvergenceError(ConicalABError):
    """Raised when an iterative method exhausts its iteration budget."""
    pass


class IllConditionedError(ConicalABError):
    """Raised when sampled data cannot resolve the requested quantity."""
    pass


NUMERICAL_FAILURES = (
    PoleError,
    NoBoundStateError,
    BracketError,
    NonConvergenceError,
    IllConditionedError,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception to the command-line exit code.

    Args:
        error: Exception raised while running a command

    Returns:
        1 for validation/domain errors, 2 for numerical failures, 3 for I/O errors
    """
    # imported lazily: input_validation depends on this module
    from input_validation import ValidationError

    if isinstance(error, (ValidationError, DomainError)):
        return EXIT_VALIDATION
    if isinstance(error, NUMERICAL_FAILURES):
        return EXIT_NUMERICAL
    if isinstance(error, OSError):
        return EXIT_IO
    return EXIT_NUMERICAL


class ErrorAggregator:
    """
    Aggregate and track errors across multiple operations.

    Grid commands record rows that hit a pole here instead of aborting; the
    verification suite records failed checks.
    """

    def __init__(self, max_errors: int = 1000):
        """
        Initialize error aggregator.

        Args:
            max_errors: Maximum number of errors to track
        """
        self.max_errors = max_errors
        self.errors = []

    def add_error(self, error: Exception, context: Optional[str] = None):
        """
        Add error to aggregator.

        Args:
            error: Exception that occurred
            context: Optional context string (grid point, check name)
        """
        error_info = {
            "timestamp": datetime.now(),
            "error": error,
            "type": type(error).__name__,
            "message": str(error),
            "context": context
        }

        self.errors.append(error_info)

        if len(self.errors) > self.max_errors:
            self.errors = self.errors[-self.max_errors:]

        logger.warning(f"Error recorded: {error_info['type']} - {error_info['message']}"
                       + (f" [{context}]" if context else ""))

    def get_error_summary(self) -> dict:
        """
        Get summary of errors.

        Returns:
            Dictionary with error statistics
        """
        if not self.errors:
            return {"total_errors": 0, "error_types": {}}

        error_types = {}
        for error_info in self.errors:
            error_type = error_info["type"]
            error_types[error_type] = error_types.get(error_type, 0) + 1

        return {
            "total_errors": len(self.errors),
            "error_types": error_types,
            "most_common": max(error_types.items(), key=lambda x: x[1])[0]
        }

    def clear(self):
        """Clear all recorded errors."""
        self.errors.clear()

    def __len__(self):
        return len(self.errors)

    def __repr__(self):
        summary = self.get_error_summary()
        return f"ErrorAggregator({summary['total_errors']} errors)"
