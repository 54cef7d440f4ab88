"""Exception types shared across the package."""


class IfsCertError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(IfsCertError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class DimensionMismatchError(DomainError):
    """Two geometric objects do not share the same ambient dimension."""


class TailNotCertifiableError(IfsCertError):
    """A tail bound was requested for a comparison function without a
    summability certificate."""


class CertificateViolationError(IfsCertError):
    """A supplied summability certificate is inconsistent with the observed
    iterates of the comparison function."""


class MapEvaluationError(IfsCertError):
    """A component map could not be evaluated at the given point."""


class ResourceBudgetError(IfsCertError):
    """An iteration would exceed the configured point or iteration budget."""


class ExpressionError(IfsCertError, ValueError):
    """Problem with an arithmetic expression."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


class WordSyntaxError(IfsCertError, ValueError):
    """Malformed textual word."""


class ConfigError(IfsCertError, ValueError):
    """Malformed or semantically invalid system configuration.

    ``path`` locates the offending field (dotted), when known.
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class UsageError(IfsCertError, ValueError):
    """Bad command-line usage (maps to exit code 2)."""
