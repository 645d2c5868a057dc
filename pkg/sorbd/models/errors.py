"""
Error Models
Exception hierarchy and CLI error response schemas
"""

from typing import List, Optional

from pydantic import BaseModel


# Standard error codes
class ErrorCode:
    """Standard error codes used across the library and CLI"""
    # Input errors
    SHAPE_MISMATCH = "SHAPE_MISMATCH"
    SPATIAL_KIND = "SPATIAL_KIND"
    MALFORMED_LIE_ALGEBRA = "MALFORMED_LIE_ALGEBRA"
    INVALID_ROTATION = "INVALID_ROTATION"
    MODEL_VALIDATION = "MODEL_VALIDATION"
    MODEL_FILE = "MODEL_FILE"
    USAGE_ERROR = "USAGE_ERROR"

    # Numerical errors
    NON_PHYSICAL_INERTIA = "NON_PHYSICAL_INERTIA"
    SINGULAR_INERTIA = "SINGULAR_INERTIA"
    FACTORIZATION_FAILED = "FACTORIZATION_FAILED"
    UNSUPPORTED_OPERATION = "UNSUPPORTED_OPERATION"

    CONTRACT_VIOLATION = "CONTRACT_VIOLATION"

    # Verification
    VERIFICATION_FAILED = "VERIFICATION_FAILED"


class SorbdError(Exception):
    """Base class for library errors"""
    code: str = "SORBD_ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ShapeMismatchError(SorbdError, ValueError):
    """Raised when array or tensor dimensions do not line up"""
    code = ErrorCode.SHAPE_MISMATCH


class SpatialKindError(SorbdError, TypeError):
    """Raised when motion and force vectors are mixed"""
    code = ErrorCode.SPATIAL_KIND


class MalformedLieAlgebraError(SorbdError, ValueError):
    """Raised when a 4x4 matrix does not have the se(3) pattern"""
    code = ErrorCode.MALFORMED_LIE_ALGEBRA


class InvalidRotationError(SorbdError, ValueError):
    """Raised when a rotation matrix is not orthonormal with det +1"""
    code = ErrorCode.INVALID_ROTATION


class ModelValidationError(SorbdError, ValueError):
    """Raised when a kinematic tree violates its structural invariants"""
    code = ErrorCode.MODEL_VALIDATION


class ModelFileError(SorbdError, ValueError):
    """Raised when a model file cannot be parsed"""
    code = ErrorCode.MODEL_FILE

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line  # 1-based line number in the source document


class NonPhysicalInertiaError(SorbdError, ValueError):
    """Raised for non-positive mass or a rotational inertia that is not SPD"""
    code = ErrorCode.NON_PHYSICAL_INERTIA


class SingularInertiaError(SorbdError, ArithmeticError):
    """Raised when an articulated-body joint inertia cannot be inverted"""
    code = ErrorCode.SINGULAR_INERTIA


class FactorizationError(SorbdError, ArithmeticError):
    """Raised when the mass matrix Cholesky factorization fails"""
    code = ErrorCode.FACTORIZATION_FAILED


class UnsupportedOperationError(SorbdError, TypeError):
    """Raised for non-analytic operations on bi-complex numbers"""
    code = ErrorCode.UNSUPPORTED_OPERATION


class ContractViolationError(SorbdError, ValueError):
    """Raised by debug checks when an input contract is violated"""
    code = ErrorCode.CONTRACT_VIOLATION


class UsageError(SorbdError, ValueError):
    """Raised for malformed command-line values"""
    code = ErrorCode.USAGE_ERROR


class VerificationFailedError(SorbdError):
    """Raised when a verification run exceeds its error threshold"""
    code = ErrorCode.VERIFICATION_FAILED


class ErrorDetail(BaseModel):
    """Individual error detail"""
    field: Optional[str] = None
    message: str
    type: Optional[str] = None


class ErrorResponse(BaseModel):
    """Error document printed by the CLI on failure"""
    error_code: str
    message: str
    details: Optional[List[ErrorDetail]] = None

    @classmethod
    def from_exception(cls, exc: Exception) -> "ErrorResponse":
        """Build a response from a library or usage exception"""
        code = getattr(exc, 'code', ErrorCode.USAGE_ERROR)
        details = None
        line = getattr(exc, 'line', None)
        if line is not None:
            details = [ErrorDetail(field="line", message=str(line), type="parse_error")]
        return cls(error_code=code, message=str(exc), details=details)
