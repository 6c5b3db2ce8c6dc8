"""Tests for ALPINE exceptions."""

import pytest

from src.core.exceptions import (
    AlpineError,
    CampaignAborted,
    ConfigurationError,
    ContractViolation,
    DataError,
    GraphParseError,
    NumericalError,
    OracleError,
    ProtocolError,
    StateMismatchError,
    UndefinedAucError,
)


class TestHierarchy:
    """Test the exception hierarchy."""

    @pytest.mark.parametrize(
        "error",
        [ContractViolation, ConfigurationError, DataError, NumericalError, UndefinedAucError, OracleError],
    )
    def test_all_derive_from_base(self, error):
        """Every error is an AlpineError."""
        instance = error("message")
        assert isinstance(instance, AlpineError)
        assert str(instance) == "message"

    @pytest.mark.parametrize("error", [GraphParseError, ProtocolError, StateMismatchError])
    def test_data_errors(self, error):
        """Input problems share the DataError base (CLI exit code 3)."""
        assert issubclass(error, DataError)


class TestCampaignAborted:
    """Test the abort error."""

    def test_carries_state(self):
        state = object()
        error = CampaignAborted("oracle down", state=state)
        assert error.state is state
        assert str(error) == "oracle down"

    def test_state_optional(self):
        assert CampaignAborted("stop").state is None
