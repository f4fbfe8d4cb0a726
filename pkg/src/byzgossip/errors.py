"""Exception hierarchy for byzgossip.

All errors subclass ``ValueError`` so callers catching plain value errors keep working.
"""


class ByzGossipError(ValueError):
    """Base class for byzgossip errors."""


class InvalidParameterError(ByzGossipError):
    """A size, probability, radius or count is outside its domain."""


class ContractViolationError(ByzGossipError):
    """An input breaks a documented precondition (shape, symmetry, finiteness)."""


class ProtocolViolationError(ByzGossipError):
    """An inbox does not hold exactly one message per (receiver, neighbor) edge."""


class InsufficientPopulationError(ByzGossipError):
    """Too few honest nodes for a population statistic."""


class UndefinedFiedlerError(ByzGossipError):
    """The honest subgraph is disconnected, so no Fiedler vector exists."""


class UndefinedRatioError(ByzGossipError):
    """A robustness ratio was requested for a state with zero variance."""


class SamplingExhaustedError(ByzGossipError):
    """Random graph sampling ran out of retries.

    Attributes:
        criterion: Name of the membership constraint that was never met
    """

    def __init__(self, message: str, criterion: str):
        super().__init__(message)
        self.criterion = criterion


class ConfigError(ByzGossipError):
    """An experiment or run configuration is inconsistent."""


class TheoremViolationError(ByzGossipError):
    """An online theorem monitor failed while running in strict mode."""
