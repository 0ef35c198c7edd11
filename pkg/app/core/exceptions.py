from typing import Any, Optional


class AlbertError(Exception):
    """Base class for every error raised by the toolkit."""


class RingMismatchError(AlbertError):
    pass


class DimensionMismatchError(AlbertError):
    pass


class NotAUnitError(AlbertError):
    pass


class NotInvertibleError(AlbertError):
    pass


class InvalidScalarError(AlbertError):
    pass


class UnsupportedRingError(AlbertError):
    pass


class PreconditionError(AlbertError):
    pass


class SearchExhaustedError(AlbertError):
    pass


class ConfigurationError(AlbertError):
    pass


class ValidationFailure(AlbertError):
    """A constructed object failed one of its defining identities.

    `witness` holds JSON-ready data locating the failure (coordinates,
    monomials, coefficients) so it can be copied into a report.
    """

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness
