"""Utility Functions

Common helpers used across the laboratory: timing, directories, safe
ratios and least-squares slope fits.
"""

import logging
import time
from dataclasses import dataclass
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Sequence, TypeVar

import numpy as np
from scipy import stats

F = TypeVar("F", bound=Callable[..., Any])

logger = logging.getLogger(__name__)


def timer(func: F) -> F:
    """Decorator to measure function execution time."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        end_time = time.perf_counter()
        logger.debug(f"{func.__name__} executed in {end_time - start_time:.4f} seconds")
        return result

    return wrapper  # type: ignore[return-value]


def ensure_directory(path: str) -> Path:
    """Ensure directory exists, create if it doesn't.

    Args:
        path: Directory path to ensure exists.

    Returns:
        Path object for the directory.
    """
    dir_path = Path(path)
    dir_path.mkdir(parents=True, exist_ok=True)
    return dir_path


def safe_divide(numerator: float, denominator: float, default: float = 0.0) -> float:
    """Safely divide two numbers, returning default if denominator is zero.

    Args:
        numerator: Number to divide.
        denominator: Number to divide by.
        default: Default value if division by zero.

    Returns:
        Division result or default value.
    """
    if denominator == 0:
        return default
    return numerator / denominator


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares line y = intercept + slope·x."""

    slope: float
    intercept: float
    residual: float


def fit_slope(x: Sequence[float], y: Sequence[float]) -> SlopeFit:
    """Fit a straight line by least squares.

    Args:
        x: Abscissae, at least two distinct values.
        y: Ordinates.

    Returns:
        SlopeFit with the root-mean-square residual of the fit.
    """
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    result = stats.linregress(xs, ys)
    fitted = result.intercept + result.slope * xs
    residual = float(np.sqrt(np.mean((ys - fitted) ** 2)))
    return SlopeFit(float(result.slope), float(result.intercept), residual)
