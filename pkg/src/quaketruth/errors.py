"""Exception types shared across pipeline stages."""

from __future__ import annotations


class QuakeTruthError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(QuakeTruthError):
    """Bad or missing configuration (terminal, not retryable)."""


class InputError(QuakeTruthError):
    """Caller passed data that violates an operation's preconditions."""


class FormatError(QuakeTruthError):
    """A bundled or user-supplied file does not match its declared format."""


class TrainingError(QuakeTruthError):
    """Classifier training cannot proceed (e.g. single-class corpus)."""


class StateError(QuakeTruthError):
    """An operation was applied to an object in the wrong lifecycle state."""


class NotFoundError(QuakeTruthError):
    """Lookup of an event or truth point failed."""


class RetryableSourceError(QuakeTruthError):
    """Transient upstream failure; carries backoff metadata."""

    def __init__(self, message: str, retry_after: float = 30.0):
        super().__init__(message)
        self.retry_after = retry_after
