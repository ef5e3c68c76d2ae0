"""Exception hierarchy shared by the library and the CLI."""


class QueuetionError(Exception):
    """Base class for all library errors."""


class ValidationError(QueuetionError, ValueError):
    """Input violates a domain invariant."""


class NonPositiveParameter(ValidationError):
    pass


class NonFiniteParameter(ValidationError):
    pass


class DuplicateId(ValidationError):
    pass


class EmptyInstance(ValidationError):
    pass


class PositionOutOfRange(ValidationError, IndexError):
    pass


class BidCountMismatch(ValidationError):
    pass


class InvalidBid(ValidationError):
    pass


class UnknownParticipant(ValidationError, KeyError):
    pass


class InconsistentOrdering(ValidationError):
    """An explicit ordering does not list bids in non-increasing order."""


class SizeLimitExceeded(QueuetionError):
    pass


class OracleLimitExceeded(SizeLimitExceeded):
    pass


class FormatError(QueuetionError):
    """A file is not valid JSON or does not have the expected shape."""
