"""Custom exceptions for ALPINE operations."""


class AlpineError(Exception):
    """Base exception for ALPINE errors."""


class ContractViolation(AlpineError):
    """Raised when an operation is called outside its precondition."""


class ConfigurationError(AlpineError):
    """Raised when configuration values or strategy names are invalid."""


class DataError(AlpineError):
    """Raised when input data (graphs, masks, states) is unusable."""


class GraphParseError(DataError):
    """Raised when an edge-list or mask file line cannot be parsed."""


class ProtocolError(DataError):
    """Raised when an experiment protocol precondition does not hold."""


class StateMismatchError(DataError):
    """Raised when a checkpoint does not belong to the given graph or config."""


class NumericalError(AlpineError):
    """Raised when an optimisation or inversion produces non-finite values."""


class UndefinedAucError(AlpineError):
    """Raised when AUC is requested for single-class labels."""


class OracleError(AlpineError):
    """Raised when the oracle cannot answer a query."""


class CampaignAborted(AlpineError):
    """Raised when a campaign stops early; carries the resumable state."""

    def __init__(self, message: str, state=None) -> None:
        super().__init__(message)
        self.state = state
