"""Custom Exception Classes

Defines the exception hierarchy for the PAM laboratory. Every error logs
itself on creation so that failed rungs of a sweep leave a trace even when
the driver catches and records them.
"""

import logging
from typing import List, Optional

logger = logging.getLogger(__name__)


class PAMLabError(Exception):
    """Base exception class for laboratory errors.

    All custom exceptions in the package inherit from this base class
    to provide consistent error handling and logging.
    """

    def __init__(self, message: str, details: Optional[dict] = None):
        """Initialize laboratory error.

        Args:
            message: Human-readable error message.
            details: Optional dictionary with additional error context.
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}

        logger.error(
            f"{self.__class__.__name__}: {message}",
            extra={
                "error_details": self.details,
                "exception_type": self.__class__.__name__,
            },
        )


class ConfigurationError(PAMLabError):
    """Configuration-related errors.

    Raised for unknown keys, violated constraints and unreadable
    configuration documents. ``key`` names the offending key when known.
    """

    def __init__(
        self, message: str, key: Optional[str] = None, details: Optional[dict] = None
    ):
        super().__init__(message, details)
        self.key = key


class GridError(PAMLabError):
    """Invalid grid parameters or fields living on incompatible grids."""

    pass


class FieldFormatError(PAMLabError):
    """PAMF stream failed magic, version or size validation."""

    def __init__(
        self, message: str, path: Optional[str] = None, details: Optional[dict] = None
    ):
        """Initialize field format error.

        Args:
            message: Human-readable error message.
            path: Optional file path of the offending stream.
            details: Optional dictionary with additional error context.
        """
        super().__init__(message, details)
        self.path = path


class ExponentError(PAMLabError):
    """A regularity or kernel-order exponent outside its admissible range."""

    pass


class ResolutionError(PAMLabError):
    """A length scale is not resolved by the grid.

    Raised for an under-resolved mollifier (ε < 2h), a Green kernel on a grid
    coarser than h = 1/8, or a test function radius λ < 4h.
    """

    pass


class WaveletError(PAMLabError):
    """Wavelet basis misuse.

    Raised on basis/grid incompatibility, on a regularity request the basis
    cannot certify (r ≤ |α|) and when too few levels are usable for a fit.
    """

    pass


class SolverError(PAMLabError):
    """Base class for time-stepping and fixed-point failures."""

    pass


class SolverDivergenceError(SolverError):
    """Non-finite values appeared during time stepping."""

    def __init__(
        self,
        message: str,
        step: Optional[int] = None,
        time: Optional[float] = None,
        details: Optional[dict] = None,
    ):
        """Initialize divergence error.

        Args:
            message: Human-readable error message.
            step: Time step at which the overflow was detected.
            time: Physical time of that step.
            details: Optional dictionary with additional error context.
        """
        super().__init__(message, details)
        self.step = step
        self.time = time


class PicardConvergenceError(SolverError):
    """Picard iteration did not reach the tolerance."""

    def __init__(
        self,
        message: str,
        residual_history: Optional[List[float]] = None,
        details: Optional[dict] = None,
    ):
        """Initialize Picard convergence error.

        Args:
            message: Human-readable error message.
            residual_history: Relative increments of every sweep performed.
            details: Optional dictionary with additional error context.
        """
        super().__init__(message, details)
        self.residual_history = list(residual_history or [])


class MeshMismatchError(SolverError):
    """Trajectories or coefficient fields disagree on grid or time mesh."""

    pass


class ReportError(PAMLabError):
    """Report rows failed validation or could not be written."""

    pass
