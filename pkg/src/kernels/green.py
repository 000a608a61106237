"""Cut-off Green kernel of the Laplacian in two dimensions.

G(x) = −log|x|·χ(|x|)/(2π) with a radial cutoff χ ≡ 1 on [0, 1/2] and χ ≡ 0
on [1, ∞). Off the origin ΔG = F with

    F = −(1/2π)·[2χ'/r + log r·(χ'' + χ'/r)],

obtained from Δ(uχ) = χΔu + 2∇u·∇χ + uΔχ, Δlog r = 0 and Δχ = χ'' + χ'/r.
Distributionally ΔG = −δ + F. F vanishes on |x| ≤ 1/2 and |x| ≥ 1.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from ..exceptions import ResolutionError
from ..lattice import Field, Grid
from .convolution import SpectralConvolver

logger = logging.getLogger(__name__)

MAX_GREEN_SPACING = 0.125
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QuinticCutoff:
    """C² radial cutoff 1 − S((r−inner)/(outer−inner)), S(s) = 6s⁵ − 15s⁴ + 10s³."""

    inner: float = 0.5
    outer: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.inner < self.outer:
            raise ValueError(
                f"cutoff needs 0 < inner < outer, got {self.inner}, {self.outer}"
            )

    @property
    def width(self) -> float:
        return self.outer - self.inner

    @property
    def name(self) -> str:
        return f"quintic smoothstep on [{self.inner:g}, {self.outer:g}]"

    def _s(self, r: np.ndarray) -> np.ndarray:
        return np.clip((np.asarray(r, dtype=float) - self.inner) / self.width, 0.0, 1.0)

    def value(self, r: np.ndarray) -> np.ndarray:
        s = self._s(r)
        return 1.0 - s**3 * (10.0 - 15.0 * s + 6.0 * s**2)

    def derivative(self, r: np.ndarray) -> np.ndarray:
        s = self._s(r)
        return -30.0 * s**2 * (1.0 - s) ** 2 / self.width

    def second_derivative(self, r: np.ndarray) -> np.ndarray:
        s = self._s(r)
        return -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / self.width**2


DEFAULT_CUTOFF = QuinticCutoff()


@dataclass(frozen=True, eq=False)
class GreenKernel:
    """Tabulated G, ∇G and F on one grid."""

    G: Field
    gradG: Tuple[Field, Field]
    F: Field
    cutoff: QuinticCutoff

    @property
    def grid(self) -> Grid:
        return self.G.grid

    def as_fields(self) -> Dict[str, Field]:
        """Named tables for PAMF export."""
        return {"G": self.G, "dG_dx1": self.gradG[0], "dG_dx2": self.gradG[1], "F": self.F}

    @cached_property
    def convolvers(self) -> "GreenConvolvers":
        """Convolution operators with the tables, built on first use."""
        return GreenConvolvers(
            G=SpectralConvolver(self.G),
            grad=(SpectralConvolver(self.gradG[0]), SpectralConvolver(self.gradG[1])),
            F=SpectralConvolver(self.F),
        )


@dataclass(frozen=True)
class GreenConvolvers:
    """Convolution operators with G, D_{x₁}G, D_{x₂}G and F."""

    G: SpectralConvolver
    grad: Tuple[SpectralConvolver, SpectralConvolver]
    F: SpectralConvolver


def origin_value(grid: Grid) -> float:
    """G at the origin node: the log evaluated at half a cell."""
    return -math.log(grid.spacing / 2.0) / TWO_PI


def build_green(grid: Grid, cutoff: Optional[QuinticCutoff] = None) -> GreenKernel:
    """Tabulate G, ∇G and F analytically on a grid.

    Args:
        grid: Lattice with h ≤ 1/8.
        cutoff: Radial cutoff; the quintic smoothstep on [1/2, 1] by default.

    Returns:
        The Green kernel. The origin node stores G(0) = −log(h/2)/(2π),
        ∇G(0) = 0 and F(0) = 0.

    Raises:
        ResolutionError: If h > 1/8.
    """
    if grid.spacing > MAX_GREEN_SPACING:
        raise ResolutionError(
            f"Green kernel needs h ≤ 1/8 to resolve |x| = 1/2, got h={grid.spacing}",
            details={"spacing": grid.spacing},
        )
    return _build_green(grid, cutoff or DEFAULT_CUTOFF)


@lru_cache(maxsize=16)
def _build_green(grid: Grid, cutoff: QuinticCutoff) -> GreenKernel:
    x1, x2 = grid.mesh()
    r = grid.radius()
    off_origin = r > 0
    safe_r = np.where(off_origin, r, 1.0)
    log_r = np.log(safe_r)

    chi = cutoff.value(r)
    dchi = cutoff.derivative(r)
    d2chi = cutoff.second_derivative(r)

    G = np.where(off_origin, -log_r * chi / TWO_PI, origin_value(grid))
    dG_dr = -(chi / safe_r + log_r * dchi) / TWO_PI
    grad1 = np.where(off_origin, dG_dr * x1 / safe_r, 0.0)
    grad2 = np.where(off_origin, dG_dr * x2 / safe_r, 0.0)
    F = np.where(
        off_origin, -(2.0 * dchi / safe_r + log_r * (d2chi + dchi / safe_r)) / TWO_PI, 0.0
    )

    logger.info(f"Built Green kernel n={grid.n} h={grid.spacing:g} cutoff={cutoff.name}")
    return GreenKernel(
        G=Field(grid, G),
        gradG=(Field(grid, grad1), Field(grid, grad2)),
        F=Field(grid, F),
        cutoff=cutoff,
    )
