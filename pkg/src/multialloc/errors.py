"""Exception hierarchy shared by every module."""


class MultiallocError(Exception):
    """Base class for all library errors."""


class DomainError(MultiallocError, ValueError):
    """An item set reaches outside the ground set of a valuation."""


class MalformedValuationError(MultiallocError, ValueError):
    """A valuation table is incomplete or violates normalization."""


class ResourceLimitError(MultiallocError):
    """An exhaustive computation would exceed its configured size limit."""


class StateError(MultiallocError, KeyError):
    """A game state that is not reachable under the queried sequence."""


class PreconditionError(MultiallocError, ValueError):
    """Inputs violate a documented precondition (width, parity, sizes)."""


class ProviderError(MultiallocError):
    """A multi-allocation provider returned an invalid or insufficient answer."""

    def __init__(self, message, agent=None):
        super().__init__(message)
        self.agent = agent


class GenerationError(MultiallocError):
    """A random instance family could not produce a valid draw."""


class InstanceFormatError(MultiallocError, ValueError):
    """An instance or report file does not follow the schema."""
