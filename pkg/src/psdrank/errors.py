"""Exception types raised across the package."""


class PsdRankError(ValueError):
    """Base class for all domain errors."""


class FactorizationLimitExceeded(PsdRankError):
    pass


class DivisionByZero(PsdRankError, ZeroDivisionError):
    pass


class NotSymmetric(PsdRankError):
    pass


class NotSquare(PsdRankError):
    pass


class NotRankOne(PsdRankError):
    pass


class NotPsd(PsdRankError):
    pass


class DimensionMismatch(PsdRankError):
    pass


class BoundMismatch(PsdRankError):
    pass


class ZeroLine(PsdRankError):
    """The matrix has an all-zero row or column."""


class NotFullDimensional(PsdRankError):
    pass


class NegativeSlack(PsdRankError):
    pass


class SchemaError(PsdRankError):
    """A JSON document does not follow the file schema."""
