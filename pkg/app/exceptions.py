"""
Custom application exceptions for structured error handling.

Every exception carries the process exit code the command line surface
reports when it escapes a command: 2 for parse and configuration problems,
3 for analysis failures, 4 for failed example checks.
"""

from typing import Any, Optional


EXIT_OK = 0
EXIT_PARSE = 2
EXIT_ANALYSIS = 3
EXIT_PAPER_CHECK = 4


class ApplicationException(Exception):
    """Base exception for all application errors."""

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_ANALYSIS,
        error_code: str = "ANALYSIS_ERROR",
        details: Optional[dict[str, Any]] = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code
        self.details = details or {}
        super().__init__(self.message)


# ============================================================================
# Parse / configuration errors (exit 2)
# ============================================================================


class ValidationError(ApplicationException):
    """Raised when input validation fails."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(
            message=message,
            exit_code=EXIT_PARSE,
            error_code="VALIDATION_ERROR",
            details=details,
        )


class ParseError(ApplicationException):
    """Raised when an input file or literal cannot be parsed."""

    def __init__(self, message: str, source: Optional[str] = None, line: Optional[int] = None):
        location = ""
        if source is not None:
            location = f"{source}:{line}: " if line is not None else f"{source}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(
            message=f"{location}{message}",
            exit_code=EXIT_PARSE,
            error_code="PARSE_ERROR",
            details={"source": source, "line": line},
        )
        self.source = source
        self.line = line


class CommandError(ApplicationException):
    """Raised when command arguments are inconsistent."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(
            message=message,
            exit_code=EXIT_PARSE,
            error_code="COMMAND_ERROR",
            details=details,
        )


# ============================================================================
# Analysis errors (exit 3)
# ============================================================================


class NotFoundError(ApplicationException):
    """Raised when a named resource is not found."""

    def __init__(self, resource: str, message: Optional[str] = None):
        if message is None:
            message = f"{resource} not found"
        super().__init__(
            message=message,
            error_code="NOT_FOUND_ERROR",
            details={"resource": resource},
        )


class EmptySubshiftError(ApplicationException):
    """Raised when forbidden words leave no bi-infinite admissible sequence."""

    def __init__(self, message: str = "Subshift is empty"):
        super().__init__(message=message, error_code="EMPTY_SUBSHIFT")


class InconsistencyError(ApplicationException):
    """Raised when a window family is not factorial-consistent."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message=message, error_code="INCONSISTENT_WINDOWS", details=details)


class WindowOutOfRangeError(ApplicationException):
    """Raised when a window is requested outside the described part of a point."""

    def __init__(self, message: str):
        super().__init__(message=message, error_code="WINDOW_OUT_OF_RANGE")


class NonStabilizedError(ApplicationException):
    """Raised when an empirical window scan exhausts its budget."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message=message, error_code="NON_STABILIZED", details=details)


class DeltaTooLargeError(ApplicationException):
    """Raised when a pseudo-orbit's jump bound is too coarse for the requested epsilon."""

    def __init__(self, delta_exponent: int, required_exponent: int):
        super().__init__(
            message=(
                f"delta 2^-{delta_exponent} is larger than 2^-{required_exponent}; "
                "shadowing is not guaranteed"
            ),
            error_code="DELTA_TOO_LARGE",
            details={"delta_exponent": delta_exponent, "required_exponent": required_exponent},
        )


class NotChainTransitiveError(ApplicationException):
    """Raised when a closed set is not chain transitive at the requested resolution."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message=message, error_code="NOT_CHAIN_TRANSITIVE", details=details)


class BudgetError(ApplicationException):
    """Raised when a construction exceeds its length budget."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message=message, error_code="BUDGET_EXCEEDED", details=details)


class DomainError(ApplicationException):
    """Raised when a point lies outside the domain of an interval map."""

    def __init__(self, message: str):
        super().__init__(message=message, error_code="DOMAIN_ERROR")


class UnsupportedPieceError(ApplicationException):
    """Raised when a preimage computation meets a quadratic piece."""

    def __init__(self, message: str = "Preimages require affine pieces"):
        super().__init__(message=message, error_code="UNSUPPORTED_PIECE")


# ============================================================================
# Example checks (exit 4)
# ============================================================================


class PaperCheckFailure(ApplicationException):
    """Raised when one or more reproduced example checks fail."""

    def __init__(self, failed: list[str], lines: tuple[str, ...] = ()):
        super().__init__(
            message=f"{len(failed)} check(s) failed: {', '.join(failed)}",
            exit_code=EXIT_PAPER_CHECK,
            error_code="CHECK_FAILED",
            details={"failed": failed},
        )
        # report rows, echoed to stdout
        self.lines = lines
