"""Exception hierarchy shared by every module."""


class SpanStructError(Exception):
    """Base class for library errors."""


class DimensionError(SpanStructError, ValueError):
    """Length or group-spec mismatch between operands."""


class EmptyInputError(SpanStructError, ValueError):
    pass


class ResourceError(SpanStructError, RuntimeError):
    """An operation would exceed a configured size cap."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


class RequiresEmbeddingError(SpanStructError, ValueError):
    """A Fourier operation received a spec with an unbounded factor."""


class PreconditionError(SpanStructError, ValueError):
    pass


class CertificateError(SpanStructError, AssertionError):
    """A theorem-guaranteed implication failed; always a bug."""
