"""Exception hierarchy shared by all polydiam modules."""


class PolydiamError(Exception):
    """Base class for every error raised by the package."""


class DomainError(PolydiamError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(PolydiamError, ValueError):
    """An operation was called with inputs violating its stated precondition."""


class ResourceError(PolydiamError, RuntimeError):
    """A configured size cap would be exceeded."""

    def __init__(self, message: str, cap_name: str = "", cap_value: int | None = None):
        super().__init__(message)
        self.cap_name = cap_name
        self.cap_value = cap_value


class ConsistencyError(PolydiamError, AssertionError):
    """An internal identity failed; indicates a bug rather than bad input."""
