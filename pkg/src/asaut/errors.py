"""Exception types shared across the package."""


class AsautError(Exception):
    """Base class for all package errors."""


class DegreeOutOfRange(AsautError, ValueError):
    pass


class FieldMismatch(AsautError, ValueError):
    pass


class ZeroPolynomial(AsautError, ValueError):
    pass


class VarSetMismatch(AsautError, ValueError):
    pass


class IndexOutOfRange(AsautError, ValueError):
    pass


class UnsupportedGenus(AsautError, ValueError):
    """Raised for Scholten-Zhu genera whose table row reads "none"."""


class NotAnAutomorphism(AsautError, ValueError):
    pass


class PatternMiss(AsautError):
    """Basis elements matched no extraction rule; they are kept in ``elements``."""

    def __init__(self, message, elements=()):
        super().__init__(message)
        self.elements = list(elements)


class SquarefreenessUnknown(AsautError):
    pass


class NotStabilized(AsautError):
    def __init__(self, message, counts=None):
        super().__init__(message)
        self.counts = dict(counts or {})


class StructureViolation(AsautError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class LimitExceeded(AsautError):
    """Buchberger ran past one of its resource limits.

    ``snapshot`` records how far the computation got so a caller can decide
    whether to retry with another order or with presets.
    """

    def __init__(self, message, snapshot=None):
        super().__init__(message)
        self.snapshot = dict(snapshot or {})
