"""Exception types shared across the package.

Every failure mode that callers are expected to branch on gets its own
class; anything else is a plain ValueError.
"""


class IdealisError(Exception):
    pass


class DivisionByZero(IdealisError, ZeroDivisionError):
    pass


class FieldMismatch(IdealisError):
    pass


class RingMismatch(IdealisError):
    pass


class BadPrime(IdealisError):
    """The chosen prime collides with a denominator or lacks a needed root."""


class BadCharacteristic(IdealisError):
    pass


class MissingBasis(IdealisError):
    pass


class ResourceLimit(IdealisError):
    """A configured cap was hit.  Carries the statistics at the moment of abort."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class UnsupportedFieldForModel(IdealisError):
    pass


class DuplicateLines(IdealisError):
    pass


class NonEssential(IdealisError):
    pass


class ClosureBoundExceeded(IdealisError):
    pass


class EmptyKernel(IdealisError):
    pass


class PrimeTooLarge(IdealisError):
    pass


class NonOrdinaryUnsupported(IdealisError):
    pass


class ParseError(IdealisError):
    pass
