"""Exception types shared across the package."""


class RelGraphError(Exception):
    """Base class for all package errors."""


class GraphFormatError(RelGraphError, ValueError):
    """A graph6/sparse6 line could not be decoded."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class InvalidGraphError(RelGraphError, ValueError):
    """The graph does not satisfy an operation's precondition."""


class ResourceLimitError(RelGraphError, RuntimeError):
    """An enumeration would exceed its configured work budget."""
