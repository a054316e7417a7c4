"""
Error Handler

This module provides the exception hierarchy and the centralized CLI error
handling for the MoLe toolkit.

The Error Handler is responsible for:
1. Defining structured errors for validation and numeric failures
2. Mapping errors to process exit codes
3. Logging errors with context
4. Printing user-facing messages without leaking secret material

Critical:
- Every error carries an exit code (2 usage/validation, 1 runtime/numeric)
- User messages must never contain M′, the permutation or the seed
- Unexpected exceptions must still produce exit code 1

Classes:
    MoleError: Base exception class for toolkit errors
    ValidationError: Input and geometry validation errors
    NumericError: Numerical failures (singular systems, retries)
    ErrorHandler: CLI-side error processing
"""

import logging
import sys
import traceback
from typing import Any, Dict, Optional, TextIO

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class MoleError(Exception):
    """
    Base exception class for all toolkit errors.

    Attributes:
        message (str): Internal error message for logging
        details (dict): Additional error context and metadata
        user_message (str): Message printed to the CLI user
        exit_code (int): Process exit code for this error class
    """

    exit_code = EXIT_RUNTIME

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        user_message: Optional[str] = None
    ):
        """
        Initialize the error.

        Args:
            message (str): Internal error message
            details (dict, optional): Additional error context
            user_message (str, optional): User-friendly message

        Note:
            If user_message is not provided, message is used
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}
        self.user_message = user_message or message


class ValidationError(MoleError):
    """Raised when input validation fails (bad flags, shapes, ranges)."""

    exit_code = EXIT_USAGE


class ConfigurationError(ValidationError):
    """Raised when environment configuration or a document is malformed."""


class DimensionMismatch(ValidationError):
    """Raised when matrix operands have incompatible shapes."""


class LengthMismatch(ValidationError):
    """Raised when a row vector has the wrong length for an operation."""


class GeometryMismatch(ValidationError):
    """Raised when tensors, kernels, secrets or layers disagree on geometry."""


class NonDivisible(ValidationError):
    """Raised when κ does not divide αm²."""


class DomainError(ValidationError):
    """Raised when a bound is evaluated outside its mathematical domain."""


class InsufficientPairs(ValidationError):
    """Raised when too few D-T pairs are supplied to stack a q×q system."""


class NumericError(MoleError):
    """Base class for numerical failures."""


class SingularMatrix(NumericError):
    """Raised when a pivot falls below the relative singularity threshold."""


class RetryExhausted(NumericError):
    """Raised when random sampling fails its acceptance gate too often."""


class ZeroNorm(NumericError):
    """Raised when normalizing an object (or column) of zero norm."""


class RankDeficient(NumericError):
    """Raised when a stacked D-T system is numerically singular."""


class FileFormatError(MoleError):
    """Raised when a file has a bad magic, header or truncated payload."""


class ErrorHandler:
    """
    Centralized error handling for the command-line surface.

    This class:
    1. Logs errors with context
    2. Prints user-facing messages to stderr
    3. Maps errors to exit codes
    4. Keeps simple error statistics

    Attributes:
        error_count (int): Number of errors handled
        last_error (Exception): Last error that occurred
        stream (TextIO): Where user messages are written
    """

    def __init__(self, stream: Optional[TextIO] = None):
        self.error_count = 0
        self.last_error: Optional[BaseException] = None
        self.stream = stream

    def handle(self, error: BaseException, context: Optional[Dict[str, Any]] = None) -> int:
        """
        Handle an error raised by a command.

        Args:
            error: The error that occurred
            context: Additional context information (command name, item index)

        Returns:
            int: The exit code for the process
        """
        self.error_count += 1
        self.last_error = error
        stream = self.stream or sys.stderr

        if isinstance(error, MoleError):
            self.log_error(error, context)
            print(f"error: {error.user_message}", file=stream)
            return error.exit_code

        if isinstance(error, KeyboardInterrupt):
            print("interrupted", file=stream)
            return EXIT_RUNTIME

        logger.error(
            "Unexpected error",
            exc_info=error,
            extra={'details': {'error_type': type(error).__name__, **(context or {})}}
        )
        print("error: an unexpected error occurred; see the log for details", file=stream)
        return EXIT_RUNTIME

    def log_error(self, error: MoleError, context: Optional[Dict[str, Any]] = None) -> None:
        """
        Log a toolkit error with additional context.

        Args:
            error: The error to log
            context: Additional context information
        """
        error_details = {
            'error_type': type(error).__name__,
            'error_message': error.message,
            'exit_code': error.exit_code,
            **error.details,
            **(context or {})
        }
        if error.exit_code == EXIT_RUNTIME:
            error_details['stack_trace'] = ''.join(
                traceback.format_exception(type(error), error, error.__traceback__)
            )
        logger.error("Error occurred", extra={'details': error_details})
