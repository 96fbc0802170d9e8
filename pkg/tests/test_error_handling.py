"""Tests for the error hierarchy, exit codes and the error aggregator."""
import pytest

from error_handling import (
    EXIT_IO,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    BracketError,
    ConicalABError,
    DegenerateChannelError,
    ErrorAggregator,
    IllConditionedError,
    NoBoundStateError,
    NonConvergenceError,
    PhysicsDomainError,
    PoleError,
    SpecialFunctionDomainError,
    exit_code_for,
)
from input_validation import ValidationError


class TestHierarchy:
    """Test exception relationships."""

    @pytest.mark.parametrize("cls", [SpecialFunctionDomainError, PhysicsDomainError,
                                     DegenerateChannelError])
    def test_domain_errors_are_value_errors(self, cls):
        """Test domain errors are ValueErrors in the package hierarchy."""
        assert issubclass(cls, ValueError)
        assert issubclass(cls, ConicalABError)

    @pytest.mark.parametrize("cls", [PoleError, NoBoundStateError, BracketError,
                                     NonConvergenceError, IllConditionedError])
    def test_numerical_errors_are_not_value_errors(self, cls):
        """Test numerical failures are not ValueErrors."""
        assert not issubclass(cls, ValueError)


class TestExitCodes:
    """Test mapping from exceptions to exit codes."""

    @pytest.mark.parametrize("error,code", [
        (ValidationError("bad flag"), EXIT_VALIDATION),
        (PhysicsDomainError("alpha"), EXIT_VALIDATION),
        (DegenerateChannelError("j = 0"), EXIT_VALIDATION),
        (PoleError("pole"), EXIT_NUMERICAL),
        (NoBoundStateError("none"), EXIT_NUMERICAL),
        (IllConditionedError("noise"), EXIT_NUMERICAL),
        (FileNotFoundError("missing"), EXIT_IO),
        (PermissionError("denied"), EXIT_IO),
        (RuntimeError("other"), EXIT_NUMERICAL),
    ])
    def test_mapping(self, error, code):
        """Test each error maps to its exit code."""
        assert exit_code_for(error) == code

    def test_ok_is_zero(self):
        """Test success exits with 0."""
        assert EXIT_OK == 0


class TestErrorAggregator:
    """Test error aggregation."""

    def test_summary(self):
        """Test the summary counts errors by type."""
        aggregator = ErrorAggregator()
        aggregator.add_error(PoleError("a"), context="m=0")
        aggregator.add_error(PoleError("b"))
        aggregator.add_error(BracketError("c"))
        summary = aggregator.get_error_summary()
        assert summary["total_errors"] == 3
        assert summary["error_types"] == {"PoleError": 2, "BracketError": 1}
        assert summary["most_common"] == "PoleError"
        assert len(aggregator) == 3

    def test_empty(self):
        """Test an empty aggregator summarizes to zero."""
        aggregator = ErrorAggregator()
        assert aggregator.get_error_summary() == {"total_errors": 0, "error_types": {}}

    def test_max_errors(self):
        """Test only the newest max_errors entries are kept."""
        aggregator = ErrorAggregator(max_errors=2)
        for i in range(5):
            aggregator.add_error(PoleError(str(i)))
        assert [e["message"] for e in aggregator.errors] == ["3", "4"]

    def test_logs_warning(self, caplog):
        """Test recording an error logs a warning with its context."""
        ErrorAggregator().add_error(PoleError("boom"), context="k=1")
        assert "PoleError - boom [k=1]" in caplog.text

    def test_clear(self):
        """Test clear empties the aggregator."""
        aggregator = ErrorAggregator()
        aggregator.add_error(PoleError("a"))
        aggregator.clear()
        assert len(aggregator) == 0
        assert repr(aggregator) == "ErrorAggregator(0 errors)"
