"""Exception types shared across the package."""


class PermcmError(Exception):
    """Base class for every error raised by this package."""


class CapExceeded(PermcmError):
    """A group closure grew beyond the configured element cap."""


class NotASubgroup(PermcmError):
    pass


class NotApplicable(PermcmError):
    pass


class Unclassifiable(PermcmError):
    """No case of the classification matched; indicates a bug."""


class DegreeMismatch(PermcmError):
    pass


class LengthMismatch(PermcmError):
    pass


class IndexOutOfRange(PermcmError):
    pass


class NotSymmetric(PermcmError):
    pass


class NotAnOrbitMonomial(PermcmError):
    pass


class ForeignFace(PermcmError):
    """A face that does not belong to the complex it was used with."""


class NotAFace(PermcmError):
    pass


class NotInvariant(PermcmError):
    pass


class DomainMismatch(PermcmError):
    pass


class BudgetExceeded(PermcmError):
    """A search stopped before exhausting its space."""


class InvalidShelling(PermcmError):
    pass


class SizeMismatch(PermcmError):
    pass


class SystemUnsolvable(PermcmError):
    pass


class NotPrime(PermcmError):
    pass


class PointOutOfRange(PermcmError):
    pass


class ParseError(PermcmError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


class NonIntegerCoefficientInZMode(ParseError):
    pass


class CellBasisNotFound(PermcmError):
    """The greedy cell-basis search stalled or produced a non-basis."""

    def __init__(self, message: str, selected=(), blocking=()):
        super().__init__(message)
        self.selected = tuple(selected)
        self.blocking = tuple(blocking)
