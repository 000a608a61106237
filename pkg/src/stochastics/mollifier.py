"""The standard bump mollifier ρ_ε and mollification ξ_ε = ρ_ε * ξ.

ρ(x) = c·exp(−1/(1−|x|²)) on the unit ball, with c fixed by ∫ρ = 1, and
ρ_ε(x) = ε⁻²ρ(x/ε). The same profile, rescaled, serves as the test function
η^λ of the enhancement module.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from ..exceptions import ResolutionError
from ..kernels.convolution import SpectralConvolver
from ..lattice import Field, Grid
from .noise import NoiseSample

logger = logging.getLogger(__name__)

PROFILE_NAME = "bump c*exp(-1/(1-|x|^2)) on |x|<1"
MIN_NODES_PER_RADIUS = 2


def _unnormalised_bump(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = r < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


@lru_cache(maxsize=1)
def bump_normalisation() -> float:
    """c with ∫_{R²} c·exp(−1/(1−|x|²)) dx = 1."""
    mass, _ = integrate.quad(
        lambda r: 2.0 * math.pi * r * math.exp(-1.0 / (1.0 - r * r)) if r < 1 else 0.0,
        0.0,
        1.0,
        epsabs=0.0,
        epsrel=1e-12,
    )
    return 1.0 / mass


@lru_cache(maxsize=1)
def bump_l2_norm_squared() -> float:
    """‖ρ‖²_{L²} of the unit-scale bump."""
    c = bump_normalisation()
    energy, _ = integrate.quad(
        lambda r: 2.0 * math.pi * r * math.exp(-2.0 / (1.0 - r * r)) if r < 1 else 0.0,
        0.0,
        1.0,
        epsabs=0.0,
        epsrel=1e-12,
    )
    return c * c * energy


def bump_profile(r: np.ndarray) -> np.ndarray:
    """ρ as a function of |x|, normalised to unit integral."""
    return bump_normalisation() * _unnormalised_bump(r)


def bump_field(grid: Grid, radius: float) -> Field:
    """ρ_radius tabulated at the nodes and renormalised so Σρ·h² = 1 exactly.

    Raises:
        ResolutionError: If the radius spans fewer than two cells.
    """
    if radius < MIN_NODES_PER_RADIUS * grid.spacing:
        raise ResolutionError(
            f"bump of radius {radius} under-resolved on h={grid.spacing}",
            details={"radius": radius, "spacing": grid.spacing},
        )
    values = _unnormalised_bump(grid.radius() / radius)
    values = values / (values.sum() * grid.cell_area)
    return Field(grid, values)


@dataclass(frozen=True)
class MollifierSpec:
    """Mollifier ρ_ε for a scale ε > 0."""

    epsilon: float
    profile: str = PROFILE_NAME

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ResolutionError(
                f"mollifier scale must be positive and finite, got {self.epsilon}"
            )

    def l2_norm_squared(self) -> float:
        """‖ρ_ε‖²_{L²} = ε⁻²‖ρ‖²_{L²}."""
        return bump_l2_norm_squared() / self.epsilon**2

    def check_resolved(self, grid: Grid) -> None:
        if self.epsilon < MIN_NODES_PER_RADIUS * grid.spacing:
            raise ResolutionError(
                f"mollifier under-resolved: ε={self.epsilon} < 2h={2 * grid.spacing}",
                details={"epsilon": self.epsilon, "spacing": grid.spacing},
            )

    def kernel(self, grid: Grid) -> Field:
        """ρ_ε tabulated on the grid."""
        self.check_resolved(grid)
        return bump_field(grid, self.epsilon)


@lru_cache(maxsize=16)
def mollifier_convolver(grid: Grid, epsilon: float) -> SpectralConvolver:
    """Cached convolution operator f ↦ ρ_ε * f."""
    return SpectralConvolver(MollifierSpec(epsilon).kernel(grid))


def mollify(xi: NoiseSample, m: MollifierSpec) -> Field:
    """Mollify a noise sample.

    Args:
        xi: White-noise sample (or an injected field).
        m: Mollifier.

    Returns:
        ξ_ε = ρ_ε * ξ on the same grid.

    Raises:
        ResolutionError: If ε < 2h.
    """
    m.check_resolved(xi.grid)
    logger.debug(f"Mollifying seed={xi.seed} at ε={m.epsilon}")
    return mollifier_convolver(xi.grid, float(m.epsilon))(xi.field)
