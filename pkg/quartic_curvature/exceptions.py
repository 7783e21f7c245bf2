"""
Exceptions raised across the package.

Input errors derive from ValueError so callers that only care about bad input
can catch them generically; the CLI maps them to exit status 2.
"""
from typing import Any, Optional

__all__ = [
    "InvalidParametersError",
    "DomainError",
    "DisconnectedGraphError",
    "InapplicableError",
    "InconsistencyError",
    "VerificationError",
    "SearchTruncatedError",
]


class InvalidParametersError(ValueError):
    """Raise when conflicting or otherwise invalid parameters"""


class DomainError(ValueError):
    """Raise when valid input falls outside the domain of an operation"""


class DisconnectedGraphError(DomainError):
    """Raise when a graph is disconnected, i.e. its diameter is infinite"""


class InapplicableError(DomainError):
    """Raise when the hypotheses of a bound are not met"""


class InconsistencyError(RuntimeError):
    """Raise when an internal invariant is violated"""


class VerificationError(AssertionError):
    """Raise when a verified quantity does not match its expected value"""

    def __init__(self, field: str, expected: Any, observed: Any, subject: Optional[str] = None):
        self.field = field
        self.expected = expected
        self.observed = observed
        self.subject = subject
        prefix = f"{subject}: " if subject else ""
        super().__init__(f"{prefix}{field} mismatch (expected {expected!r}, observed {observed!r})")


class SearchTruncatedError(RuntimeError):
    """Raise when an extension search branch was cut by the vertex cap"""

    def __init__(self, message: str, outcome: Any = None):
        self.outcome = outcome
        super().__init__(message)
