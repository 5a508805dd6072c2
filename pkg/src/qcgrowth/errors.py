"""Exception hierarchy shared by all modules."""


class QCGError(Exception):
    """Base class for library errors."""


class DegenerateCoefficientError(QCGError, ValueError):
    """|mu| is at (or numerically indistinguishable from) 1."""


class InvalidDilatationError(QCGError, ValueError):
    pass


class DomainError(QCGError, ValueError):
    """Argument lies outside the domain of a function or field."""


class DilatationOverflowError(QCGError, ArithmeticError):
    pass


class IterationOverflowError(QCGError, OverflowError):
    """Iterated exponential not representable in binary floating point."""


class CenterMismatchError(QCGError, ValueError):
    pass


class ConditionIViolation(QCGError, ValueError):
    """The weight integral is not strictly positive and finite."""


class ConvergenceError(QCGError, ArithmeticError):
    """Quadrature did not reach its tolerance.

    The best available estimate and its error bound are kept so callers can
    still report a value with a widened tolerance.
    """

    def __init__(self, message, estimate, error_bound):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class HypothesisViolationError(QCGError, ValueError):
    pass


class DegenerateCondenserError(QCGError, ValueError):
    pass


class AdmissibilityError(QCGError, ValueError):
    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class InsufficientGridError(QCGError, ValueError):
    pass
