"""
Custom exception types shared across the services and the command line.
"""

from typing import Optional


class InvalidParameter(ValueError):
    """Raised when a model or run parameter violates its domain."""

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        super().__init__(message)
        self.field = field


class EnumerationBoundExceeded(ValueError):
    """Raised when an exhaustive permutation search would exceed the configured bound."""


class SizeCapExceeded(ValueError):
    """Raised when a dense Fock-space construction would exceed the mode cap."""


class BranchCutError(ValueError):
    """Raised when a multivalued function is evaluated on its cut without a branch."""


class StepSizeViolation(ValueError):
    """Raised when a fixed integration step is too coarse for the coupling scale."""


class ZeroNormState(ValueError):
    """Raised when a measurement branch leaves a state with vanishing norm."""


class ConfigFileError(ValueError):
    """Raised when a JSON configuration file cannot be read or parsed."""


class VerificationFailure(AssertionError):
    """Raised when an oracle cross-check suite reports failures."""
