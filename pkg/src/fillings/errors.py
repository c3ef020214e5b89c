"""Exception hierarchy.

Every error raised on purpose by this package derives from ``FillingError``;
the CLI maps ``BudgetError`` subclasses to exit status 2 and everything else
to exit status 1.
"""


class FillingError(Exception):
    """Base class for all package errors."""


class ValidationError(FillingError, ValueError):
    pass


class MissingFace(ValidationError):
    pass


class BadIndex(ValidationError):
    pass


class DuplicateSimplex(ValidationError):
    pass


class DimOutOfRange(ValidationError):
    pass


class NotPureDimensional(ValidationError):
    pass


class NotACycle(ValidationError):
    pass


class Disconnected(ValidationError):
    pass


class NonpositiveScale(ValidationError):
    pass


class UnsupportedDimension(ValidationError):
    pass


class ZeroDistance(ValidationError):
    pass


class BadParams(ValidationError):
    pass


class NotSimplicial(ValidationError):
    pass


class NonpositiveT(ValidationError):
    pass


class NotEuclideanRealizable(ValidationError):
    pass


class BadAttachingCycle(ValidationError):
    pass


class NoFundamentalClass(FillingError):
    pass


class NotOrientable(NoFundamentalClass):
    pass


class NeverDies(FillingError):
    pass


class Infeasible(FillingError):
    pass


class NotAMultiple(FillingError):
    pass


class RTooSmall(FillingError):
    pass


class HypothesisFailed(FillingError):
    pass


class BudgetError(FillingError):
    pass


class SearchBudgetExceeded(BudgetError):
    pass
