"""Square lattices and scalar fields.

A :class:`Grid` discretises the box [-L, L]² with n nodes per axis; node
(i, j) sits at x = (-L + i·h, -L + j·h), so the origin is node (n/2, n/2).
A :class:`Field` is an immutable array of finite values on a grid.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np

from ..exceptions import GridError

logger = logging.getLogger(__name__)

Point = Tuple[float, float]


@dataclass(frozen=True)
class Grid:
    """Square lattice on [-L, L]² with n points per axis."""

    half_width: float
    points_per_axis: int

    def __post_init__(self):
        L, n = self.half_width, self.points_per_axis
        if not (isinstance(L, (int, float)) and math.isfinite(L) and L > 0):
            raise GridError(f"half-width must be a positive real, got {L}")
        if L < 1.0:
            raise GridError(f"half-width must be at least 1, got {L}")
        if not isinstance(n, (int, np.integer)) or n < 8:
            raise GridError(f"points per axis must be an integer ≥ 8, got {n}")
        if n & (n - 1) != 0:
            raise GridError(f"points per axis must be a power of two, got {n}")

    @property
    def L(self) -> float:
        return float(self.half_width)

    @property
    def n(self) -> int:
        return int(self.points_per_axis)

    @property
    def spacing(self) -> float:
        return 2.0 * self.L / self.n

    h = spacing

    @property
    def origin_index(self) -> int:
        """Index of the node at coordinate 0 along each axis."""
        return self.n // 2

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n, self.n)

    @property
    def cell_area(self) -> float:
        return self.spacing**2

    def axis(self) -> np.ndarray:
        """Node coordinates along one axis; the origin node is exactly 0."""
        return self.spacing * (np.arange(self.n) - self.origin_index)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays (x1, x2) with x1 varying along rows."""
        ax = self.axis()
        return np.meshgrid(ax, ax, indexing="ij")

    def radius(self) -> np.ndarray:
        """Euclidean norm |x| at every node, exactly symmetric under x ↦ −x."""
        offsets = (np.arange(self.n) - self.origin_index).astype(float)
        i2 = offsets[:, None] ** 2 + offsets[None, :] ** 2
        return self.spacing * np.sqrt(i2)

    def interior_mask(self, collar: float = 0.0) -> np.ndarray:
        """Nodes at sup-distance at least ``collar`` from the box boundary."""
        if collar <= 0.0:
            return np.ones(self.shape, dtype=bool)
        ax = self.axis()
        inside = np.abs(ax) <= self.L - collar + 1e-12
        return inside[:, None] & inside[None, :]

    def node_index(self, x: Point) -> Tuple[int, int]:
        """Nearest node to the point x."""
        i = int(round((x[0] + self.L) / self.spacing))
        j = int(round((x[1] + self.L) / self.spacing))
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise GridError(f"point {x} lies outside the box [-{self.L}, {self.L}]²")
        return i, j

    @property
    def dyadic_level(self) -> int:
        """J with h = 2^{-J}; raises if the spacing is not dyadic."""
        J = -math.log2(self.spacing)
        if abs(J - round(J)) > 1e-9 or round(J) < 1:
            raise GridError(f"spacing h={self.spacing} is not of the form 2^-J")
        return int(round(J))

    def refined(self) -> "Grid":
        """Same box with twice as many nodes per axis."""
        return Grid(self.L, 2 * self.n)

    def coarsened(self) -> "Grid":
        """Same box with half as many nodes per axis."""
        return Grid(self.L, self.n // 2)


def make_grid(L: float, n: int) -> Grid:
    """Build a grid on [-L, L]² with spacing h = 2L/n.

    Args:
        L: Half-width of the box, at least 1.
        n: Points per axis, a power of two, at least 8.

    Returns:
        The grid.

    Raises:
        GridError: If n is not a power of two or L is not admissible.
    """
    return Grid(L, n)


Scalar = Union[int, float]


@dataclass(frozen=True, eq=False)
class Field:
    """Real values on every node of a grid; read-only after construction."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.shape != self.grid.shape:
            raise GridError(
                f"field shape {values.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise GridError("field values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "Field":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(
        cls, grid: Grid, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    ) -> "Field":
        """Sample a vectorised function fn(x1, x2) at the nodes."""
        x1, x2 = grid.mesh()
        return cls(grid, np.broadcast_to(fn(x1, x2), grid.shape))

    @classmethod
    def gaussian(cls, grid: Grid, variance: float) -> "Field":
        """Centred Gaussian probability density with the given per-axis variance."""
        r2 = grid.radius() ** 2
        return cls(grid, np.exp(-r2 / (2.0 * variance)) / (2.0 * np.pi * variance))

    def _check_same_grid(self, other: "Field") -> None:
        if self.grid != other.grid:
            raise GridError(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other: "Field") -> "Field":
        self._check_same_grid(other)
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        self._check_same_grid(other)
        return Field(self.grid, self.values - other.values)

    def __mul__(self, other: Union["Field", Scalar]) -> "Field":
        if isinstance(other, Field):
            self._check_same_grid(other)
            return Field(self.grid, self.values * other.values)
        return Field(self.grid, self.values * float(other))

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return Field(self.grid, -self.values)

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "Field":
        """Apply a vectorised function to the values."""
        return Field(self.grid, fn(self.values))

    def reflected(self) -> "Field":
        """Point reflection x ↦ -x; the unmatched first row and column become 0."""
        out = np.zeros(self.grid.shape)
        out[1:, 1:] = self.values[:0:-1, :0:-1]
        return Field(self.grid, out)

    def value_at(self, x: Point) -> float:
        """Value at the node nearest to x."""
        return float(self.values[self.grid.node_index(x)])

    def sup(self, collar: float = 0.0) -> float:
        """Maximum of |f| over nodes outside the collar."""
        mask = self.grid.interior_mask(collar)
        return float(np.max(np.abs(self.values[mask]))) if mask.any() else 0.0

    def mass(self) -> float:
        """Quadrature of the field, Σ f·h²."""
        return float(self.values.sum() * self.grid.cell_area)


def centred_gradient(f: Field) -> Tuple[Field, Field]:
    """Centred differences (D_{x1} f, D_{x2} f), one-sided on the outer rows."""
    d1, d2 = np.gradient(f.values, f.grid.spacing)
    return Field(f.grid, d1), Field(f.grid, d2)
