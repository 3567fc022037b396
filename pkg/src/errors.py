"""
Exception hierarchy shared by every phasemix module.

ValidationError subclasses mean the input is unusable (CLI exit 2);
NumericalError subclasses mean a computation broke down (CLI exit 3).
"""


class PhasemixError(Exception):
    """Base class for all library errors."""


class ValidationError(PhasemixError):
    exit_code = 2


class NumericalError(PhasemixError):
    exit_code = 3


# ---------- validation ----------
class NonStochasticInitial(ValidationError):
    pass


class NotSubIntensity(ValidationError):
    pass


class ComplexSpectrum(ValidationError):
    pass


class DomainError(ValidationError, ValueError):
    pass


class ModelFormatError(ValidationError):
    """Malformed model file. `location` is 'line L, column C' or a dotted field path."""

    def __init__(self, message: str, location: str = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class NotRegularlyVarying(ValidationError):
    pass


class NotFrechet(ValidationError):
    pass


# ---------- numerical ----------
class MatexpFailure(NumericalError):
    pass


class SingularMatrix(NumericalError):
    pass


class QuadratureNonconvergence(NumericalError):
    pass


class DefectiveDecompositionFailure(NumericalError):
    pass


class TruncationBoundViolated(NumericalError):
    pass


class UnimodalityCheckFailed(NumericalError):
    pass


class PrecisionLoss(NumericalError):
    pass


class DerivativeNoise(NumericalError):
    """Recorded in reports rather than raised to the caller."""
