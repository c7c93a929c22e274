"""Custom exception hierarchy for the WML simulator.

Every failure raised by the numerical core, the encoders, the simulation loops and the
command-line layer derives from :class:`WMLException`, so callers can distinguish a broken
input from a broken step and map each family to a stable exit code.
"""

from typing import Any, Optional


class WMLException(Exception):
    """Base exception for all simulator errors.

    Provides structured error information with error codes and context.

    Attributes:
        message: Human-readable error message
        code: Optional error code for programmatic handling
        context: Optional dictionary with additional error context
    """

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        context: Optional[dict[str, Any]] = None
    ) -> None:
        """Initialize the exception.

        Args:
            message: Human-readable error message
            code: Optional error code (e.g., "NUM001")
            context: Optional context dict with additional information
        """
        self.message = message
        self.code = code
        self.context = context or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        """Format exception as string."""
        if self.code:
            return f"[{self.code}] {self.message}"
        return self.message


# === Numerical kernel exceptions ===

class NumericsException(WMLException):
    """Base exception for dense linear-algebra kernel errors."""
    pass


class DimensionMismatchException(NumericsException):
    """Exception for incompatible shapes.

    Raised when:
    - A matrix is not square where a square matrix is required
    - A register layout does not match the matrix it indexes
    - Two states or channels of different dimension are compared
    """
    pass


class NumericalDriftException(NumericsException):
    """Exception for drift that exceeds roundoff.

    Raised when a matrix that should be a density matrix is too far from Hermitian or
    unit trace to be repaired by projection. This signals a broken step, not roundoff.
    """
    pass


# === Generator and channel exceptions ===

class LindbladException(WMLException):
    """Exception for invalid Lindbladian specifications or evolution times."""
    pass


# === Program-state exceptions ===

class ProgramEncodingException(WMLException):
    """Base exception for program-state encoding errors."""
    pass


class NormalizationException(ProgramEncodingException):
    """Exception for Lindblad operators without unit Schatten-2 norm.

    A program state is a unit vector, so only operators with ``||L||_2 = 1`` can be
    encoded directly. Use ``rescale_task`` to normalize the operator and stretch time.
    """
    pass


# === Simulation exceptions ===

class SimulationException(WMLException):
    """Base exception for WML simulation errors."""
    pass


class DimensionLimitException(SimulationException):
    """Exception for dilated spaces too large for dense superoperator exponentials."""
    pass


# === Verification exceptions ===

class VerificationException(WMLException):
    """Exception for verification and curve-fitting preconditions."""
    pass


# === Template exceptions ===

class TemplateException(WMLException):
    """Base exception for template rendering errors."""
    pass


class TemplateNotFoundException(TemplateException):
    """Exception for missing template files."""
    pass


class TemplateRenderException(TemplateException):
    """Exception for template rendering failures.

    Raised when:
    - Template syntax is invalid
    - Template variables are missing or invalid
    - The rendered output cannot be written
    """
    pass


# === Configuration exceptions ===

class ConfigurationException(WMLException):
    """Exception for configuration errors.

    Raised when:
    - Command-line options are inconsistent or out of range
    - Configuration files or directories are missing
    - Configuration validation fails
    """
    pass


# === Serialization exceptions ===

class SerializationException(WMLException):
    """Exception for reading or writing matrix, state and report files.

    Raised when JSON content is malformed, has the wrong shape, or the file system
    refuses a read or a write.
    """
    pass
