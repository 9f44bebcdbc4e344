"""Exception hierarchy shared by all btembed modules."""


class BtembedError(Exception):
    """Base class for every library error."""


class PrecisionExhausted(BtembedError, ArithmeticError):
    """A comparison could not be certified inside the coefficient window."""


class RankDeficient(BtembedError, ValueError):
    pass


class BadWittData(BtembedError, ValueError):
    pass


class NotSkew(BtembedError, ValueError):
    pass


class TwoZeroComponents(BtembedError, ValueError):
    pass


class ZeroComponentInJ(BtembedError, ValueError):
    pass


class FactorizationMismatch(BtembedError, ValueError):
    pass


class IndexOutOfRange(BtembedError, IndexError):
    pass


class NotSelfDual(BtembedError, ValueError):
    pass


class NotRepresentable(BtembedError, ValueError):
    pass


class BadComponentPoint(BtembedError, ValueError):
    pass


class DoesNotSplit(BtembedError, ValueError):
    pass


class OutputNotSelfDual(BtembedError, ValueError):
    pass


class NotPositiveIndex(BtembedError, ValueError):
    pass


class NotInImage(BtembedError, ValueError):
    pass


class InvalidTranslation(BtembedError, ValueError):
    pass


class GridMissesJBeta(BtembedError, ValueError):
    pass


class NotCompatibleSample(BtembedError, ValueError):
    pass


class NotProductDecomposable(BtembedError, ValueError):
    pass


class NotATranslation(BtembedError, ValueError):
    pass


class NotAffine(BtembedError, ValueError):
    pass


class SchemaError(BtembedError, ValueError):
    pass


class ValidationError(BtembedError, ValueError):
    """Scenario content is inconsistent; ``location`` names the offending block."""

    def __init__(self, message, location=None):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
