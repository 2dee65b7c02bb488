"""
Exception hierarchy for mamppi.
"""
from typing import List, Optional


class MamppiError(Exception):
    """Base class for all library errors."""


class ContractViolation(MamppiError, ValueError):
    """Raised when a precondition or dimension contract is violated."""


class NoFeasibleRolloutError(MamppiError):
    """Raised when every rollout in a batch carries the infinite cost sentinel."""

    def __init__(self, message: str = "no feasible rollout"):
        super().__init__(message)


class WindowUnderfilledError(MamppiError):
    """Raised when a state window holds too few states for a statistic."""

    def __init__(self, message: str = "window underfilled"):
        super().__init__(message)


class UndefinedAngleError(MamppiError):
    """Raised when an angle between vectors is requested for a zero vector."""

    def __init__(self, message: str = "undefined angle"):
        super().__init__(message)


class DirectionUnavailableError(MamppiError):
    """Raised when no escape from a feature has been observed yet."""

    def __init__(self, message: str = "direction unavailable"):
        super().__init__(message)


class NonFiniteEvaluationError(MamppiError):
    """Raised when a value function returns NaN or infinity."""


class ConfigurationError(MamppiError):
    """Raised when a configuration document fails validation.

    Attributes:
        fields: Dotted paths of every offending field
    """

    def __init__(self, message: str, fields: Optional[List[str]] = None):
        self.fields = list(fields or [])
        if self.fields:
            message = f"{message}: {', '.join(self.fields)}"
        super().__init__(message)
