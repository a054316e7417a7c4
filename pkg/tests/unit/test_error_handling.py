"""
Unit tests for error handling system.
"""
import io
import logging

import pytest

from core.error_handler import (
    EXIT_RUNTIME,
    EXIT_USAGE,
    ConfigurationError,
    ErrorHandler,
    FileFormatError,
    GeometryMismatch,
    InsufficientPairs,
    NonDivisible,
    RankDeficient,
    SingularMatrix,
    ValidationError,
)


@pytest.mark.unit
class TestErrorHandling:
    """Test suite for error handling functionality."""

    @pytest.mark.parametrize('error_type', [
        ValidationError, ConfigurationError, GeometryMismatch, NonDivisible, InsufficientPairs,
    ])
    def test_usage_errors_exit_2(self, error_type):
        """Validation failures map to exit code 2."""
        handler = ErrorHandler(stream=io.StringIO())
        assert handler.handle(error_type("bad input")) == EXIT_USAGE

    @pytest.mark.parametrize('error_type', [SingularMatrix, RankDeficient, FileFormatError])
    def test_runtime_errors_exit_1(self, error_type):
        """Numeric and file failures map to exit code 1."""
        handler = ErrorHandler(stream=io.StringIO())
        assert handler.handle(error_type("failed")) == EXIT_RUNTIME

    def test_unexpected_error(self, caplog):
        """Unknown exceptions exit 1 with a generic message and a logged trace."""
        # Setup
        stream = io.StringIO()
        handler = ErrorHandler(stream=stream)

        # Test
        with caplog.at_level(logging.ERROR):
            code = handler.handle(RuntimeError("boom"), {'command': 'morph'})

        # Verify
        assert code == EXIT_RUNTIME
        assert 'unexpected error' in stream.getvalue()
        assert 'boom' not in stream.getvalue()
        assert any(r.levelno == logging.ERROR for r in caplog.records)

    def test_user_message(self):
        """The printed text is the user message, not the internal one."""
        stream = io.StringIO()
        ErrorHandler(stream=stream).handle(
            ValidationError("internal detail", user_message="kappa must divide alpha*m^2")
        )
        assert stream.getvalue().strip() == "error: kappa must divide alpha*m^2"

    def test_error_tracking(self):
        handler = ErrorHandler(stream=io.StringIO())
        error = SingularMatrix("singular")
        handler.handle(ValidationError("x"))
        handler.handle(error)
        assert handler.error_count == 2
        assert handler.last_error is error

    def test_error_details(self):
        error = GeometryMismatch("shape", details={'item': 3})
        assert error.details == {'item': 3}
        assert error.user_message == "shape"

    def test_interrupt(self):
        assert ErrorHandler(stream=io.StringIO()).handle(KeyboardInterrupt()) == EXIT_RUNTIME
