"""Exception hierarchy shared by the library and the CLI."""


class ReslocError(Exception):
    """Base class for all library errors."""


class ParseError(ReslocError, ValueError):
    """Malformed polynomial or specification text."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class ResourceLimitError(ReslocError):
    """A configurable size or degree cap was exceeded."""


class NotIsolatedOrCapTooLow(ReslocError):
    """Some ``z_i^m`` never entered the ideal below the exponent cap.

    Either the zero at the origin is not isolated or the cap is too small.
    """


class InvalidCertificate(ReslocError):
    """A membership certificate failed exact verification."""


class DegenerateZero(ReslocError):
    """The Jacobian determinant vanishes at the zero."""


class NotDiagonalDistinct(ReslocError):
    """Automatic zero enumeration needs a diagonal matrix with distinct entries."""


class SingularOnSphere(ReslocError):
    """The map nearly vanishes on the integration sphere."""


class InvariantViolation(ReslocError):
    """An internal consistency check failed."""
