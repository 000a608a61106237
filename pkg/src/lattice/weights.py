"""Polynomial and exponential spatial weights.

p_a(x) = (1+|x|)^a and e_ℓ(x) = exp(ℓ(1+|x|)). For |x−y| ≤ 1 both satisfy
w(x)/w(y) ∈ [C⁻¹, C] with C = 2^|a| and C = e^|ℓ| respectively.
"""

import math
from dataclasses import dataclass
from typing import Literal, Tuple, Union

import numpy as np

from ..exceptions import ExponentError
from .grid import Grid

WeightKind = Literal["polynomial", "exponential"]
Coordinates = Union[Tuple[float, float], np.ndarray]


@dataclass(frozen=True)
class WeightSpec:
    """A weight of the polynomial family p_a or the exponential family e_ℓ."""

    kind: WeightKind
    exponent: float

    def __post_init__(self):
        if self.kind not in ("polynomial", "exponential"):
            raise ExponentError(f"unknown weight kind {self.kind!r}")
        if not math.isfinite(self.exponent):
            raise ExponentError(
                f"weight exponent must be finite, got {self.exponent}",
                details={"kind": self.kind},
            )

    @classmethod
    def polynomial(cls, a: float) -> "WeightSpec":
        return cls("polynomial", float(a))

    @classmethod
    def exponential(cls, ell: float) -> "WeightSpec":
        return cls("exponential", float(ell))

    def of_radius(self, r: np.ndarray) -> np.ndarray:
        """Weight as a function of |x|."""
        r = np.asarray(r, dtype=float)
        if self.kind == "polynomial":
            return (1.0 + r) ** self.exponent
        return np.exp(self.exponent * (1.0 + r))

    def on_grid(self, grid: Grid) -> np.ndarray:
        """Weight at every node."""
        return self.of_radius(grid.radius())

    def comparability_constant(self) -> float:
        """C with w(x)/w(y) ∈ [1/C, C] whenever |x−y| ≤ 1."""
        if self.kind == "polynomial":
            return 2.0 ** abs(self.exponent)
        return math.exp(abs(self.exponent))

    def __mul__(self, other: "WeightSpec") -> "WeightSpec":
        """Product of two weights of the same family."""
        if self.kind != other.kind:
            raise ExponentError(
                f"cannot multiply {self.kind} and {other.kind} weights"
            )
        return WeightSpec(self.kind, self.exponent + other.exponent)

    def describe(self) -> str:
        symbol = "p" if self.kind == "polynomial" else "e"
        return f"{symbol}_{self.exponent:g}"


def eval_weight(w: WeightSpec, x: Coordinates) -> np.ndarray:
    """Evaluate a weight at one point or an array of points.

    Args:
        w: Weight.
        x: A point (x1, x2) or an array whose last axis has length 2.

    Returns:
        (1+|x|)^a or exp(ℓ(1+|x|)); a float for a single point.
    """
    pts = np.asarray(x, dtype=float)
    r = np.sqrt(np.sum(pts**2, axis=-1))
    value = w.of_radius(r)
    return float(value) if np.ndim(value) == 0 else value


def weight_transfer_bound(a: float, s: float, t: float) -> float:
    """Upper bound e^{−a}(a/(t−s))^a on sup_x p_a(x)e_{ℓ+s}(x)/e_{ℓ+t}(x).

    Args:
        a: Polynomial exponent, positive.
        s: Earlier time.
        t: Later time, t > s.
    """
    if t <= s:
        raise ExponentError(f"weight transfer needs t > s, got s={s}, t={t}")
    if a <= 0:
        return 1.0
    return math.exp(-a) * (a / (t - s)) ** a


def weight_transfer_ratio(grid: Grid, a: float, ell: float, s: float, t: float) -> float:
    """Grid maximum of p_a(x)e_{ℓ+s}(x)/e_{ℓ+t}(x).

    The ℓ dependence cancels; it is kept in the signature so that callers
    state the weights they transfer between.
    """
    if t <= s:
        raise ExponentError(f"weight transfer needs t > s, got s={s}, t={t}")
    r = grid.radius()
    ratio = (
        WeightSpec.polynomial(a).of_radius(r)
        * WeightSpec.exponential(ell + s).of_radius(r)
        / WeightSpec.exponential(ell + t).of_radius(r)
    )
    return float(np.max(ratio))
