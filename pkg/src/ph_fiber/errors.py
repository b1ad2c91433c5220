"""Exception hierarchy shared by all ph_fiber modules."""


class PHFiberError(Exception):
    """Base class for domain errors (CLI exit code 3)."""

    code = "PHFiberError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class ConstantFunction(PHFiberError):
    code = "ConstantFunction"


class DomainMismatch(PHFiberError):
    code = "DomainMismatch"


class ResolutionTooLow(PHFiberError):
    code = "ResolutionTooLow"


class ClassMismatch(PHFiberError):
    code = "ClassMismatch"


class NotSameComponent(PHFiberError):
    code = "NotSameComponent"


class MalformedBarcode(PHFiberError):
    code = "MalformedBarcode"


class RepeatedEndpoints(MalformedBarcode):
    code = "RepeatedEndpoints"


class TooLarge(PHFiberError):
    code = "TooLarge"


class BoundaryViolation(PHFiberError):
    code = "BoundaryViolation"


class InconsistentBarcode(PHFiberError):
    code = "InconsistentBarcode"


class NegativeCount(InconsistentBarcode):
    code = "NegativeCount"


class NotClassified(PHFiberError):
    code = "NotClassified"


class RequiresPositiveSaddles(PHFiberError):
    code = "RequiresPositiveSaddles"


class VerificationFailed(PHFiberError):
    code = "VerificationFailed"
