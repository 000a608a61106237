"""Deterministic quadratures behind the renormalisation.

With K_i = (D_{x_i}G)*ρ_ε the mollified gradient kernels, the Itô isometry
gives

    C_ε = E|∇Y_ε(x)|² = Σ_i ‖K_i‖²_{L²},

and for the centred field Z_ε = |∇Y_ε|² − C_ε tested against η^λ,

    E[Z_ε(η^λ)²] = 2·Σ_{i,j} ⟨η^λ, C_ij² * η^λ⟩,   C_ij = K_i * K̃_j,

where K̃(x) = K(−x) and C_ij(x−x') = E[D_iY_ε(x)·D_jY_ε(x')]. The factor 2
and the cross terms come from Isserlis' formula for Wick squares.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from ..exceptions import ResolutionError
from ..kernels import QuinticCutoff, build_green, convolve
from ..kernels.convolution import SpectralConvolver
from ..lattice import Field, Grid
from ..stochastics import MollifierSpec, bump_field
from ..utils import timer

logger = logging.getLogger(__name__)

MIN_TEST_CELLS = 4
ETA_PROFILE = "bump c*exp(-1/(1-|x|^2)) rescaled to radius lambda"

KernelPair = Tuple[Field, Field]


@dataclass(frozen=True, eq=False)
class MollifiedGreen:
    """G_ε = G*ρ_ε and its gradient (D_{x₁}G)*ρ_ε, (D_{x₂}G)*ρ_ε."""

    epsilon: float
    G: Field
    gradG: KernelPair


@lru_cache(maxsize=16)
def _mollified_green(
    grid: Grid, epsilon: float, cutoff: Optional[QuinticCutoff]
) -> MollifiedGreen:
    green = build_green(grid, cutoff)
    rho = SpectralConvolver(MollifierSpec(epsilon).kernel(grid))
    return MollifiedGreen(
        epsilon=epsilon,
        G=rho(green.G),
        gradG=(rho(green.gradG[0]), rho(green.gradG[1])),
    )


def mollified_green(
    grid: Grid, epsilon: float, cutoff: Optional[QuinticCutoff] = None
) -> MollifiedGreen:
    """Mollify the Green kernel and its gradient at scale ε.

    Raises:
        ResolutionError: If ε < 2h or the grid is too coarse for G.
    """
    return _mollified_green(grid, float(epsilon), cutoff)


def gradient_kernels(
    grid: Grid, epsilon: float, cutoff: Optional[QuinticCutoff] = None
) -> KernelPair:
    """(K_1, K_2); ε = 0 returns the unmollified D_{x_i}G."""
    if epsilon == 0:
        return build_green(grid, cutoff).gradG
    return mollified_green(grid, epsilon, cutoff).gradG


@timer
def c_epsilon_quadrature(
    epsilon: float, grid: Grid, cutoff: Optional[QuinticCutoff] = None
) -> float:
    """Renormalisation constant C_ε = Σ_i Σ_x K_i(x)²h².

    Args:
        epsilon: Mollifier scale, at least 2h.
        grid: Lattice.
        cutoff: Cutoff of the Green kernel.

    Returns:
        C_ε.
    """
    MollifierSpec(epsilon).check_resolved(grid)
    k1, k2 = gradient_kernels(grid, epsilon, cutoff)
    value = float(np.sum(k1.values**2 + k2.values**2) * grid.cell_area)
    logger.debug(f"C_ε quadrature ε={epsilon} n={grid.n}: {value:.6f}")
    return value


def eta_field(grid: Grid, lam: float) -> Field:
    """η^λ: the bump profile at radius λ, normalised to unit mass.

    Raises:
        ResolutionError: If λ < 4h.
    """
    if lam < MIN_TEST_CELLS * grid.spacing:
        raise ResolutionError(
            f"test function under-resolved: λ={lam} < 4h={MIN_TEST_CELLS * grid.spacing}",
            details={"lambda": lam, "spacing": grid.spacing},
        )
    return bump_field(grid, lam)


def _check_epsilon(epsilon: float, grid: Grid) -> None:
    if epsilon < 0 or not math.isfinite(epsilon):
        raise ResolutionError(f"ε must be a non-negative real, got {epsilon}")
    if epsilon > 0:
        MollifierSpec(epsilon).check_resolved(grid)


def _cross_energy(eta: Field, left: KernelPair, right: KernelPair) -> float:
    """2·Σ_{i,j} ⟨η, (L_i * R̃_j)² * η⟩ for two pairs of gradient kernels."""
    total = 0.0
    for k_left in left:
        for k_right in right:
            covariance = convolve(k_left, k_right.reflected())
            smoothed = convolve(covariance * covariance, eta)
            total += float(np.sum(eta.values * smoothed.values))
    return 2.0 * total * eta.grid.cell_area


def z_covariance_quadrature(
    lam: float,
    epsilon: float,
    grid: Grid,
    eta: Optional[Field] = None,
    cutoff: Optional[QuinticCutoff] = None,
) -> float:
    """Second-chaos variance E[Z_ε(η^λ)²] by grid quadrature.

    Args:
        lam: Test-function scale, at least 4h.
        epsilon: Mollifier scale; 0 uses the unmollified kernel.
        grid: Lattice.
        eta: Replacement test function centred at the origin.
        cutoff: Cutoff of the Green kernel.

    Returns:
        The variance.
    """
    _check_epsilon(epsilon, grid)
    eta = eta if eta is not None else eta_field(grid, lam)
    kernels = gradient_kernels(grid, epsilon, cutoff)
    value = _cross_energy(eta, kernels, kernels)
    logger.debug(f"Z covariance λ={lam} ε={epsilon} n={grid.n}: {value:.6g}")
    return value


def z_difference_variance(
    lam: float,
    epsilon: float,
    grid: Grid,
    cutoff: Optional[QuinticCutoff] = None,
) -> float:
    """E[(Z_ε(η^λ) − Z(η^λ))²] from the mollified and bare gradient kernels."""
    _check_epsilon(epsilon, grid)
    eta = eta_field(grid, lam)
    mollified = gradient_kernels(grid, epsilon, cutoff)
    bare = gradient_kernels(grid, 0.0, cutoff)
    value = (
        _cross_energy(eta, mollified, mollified)
        - 2.0 * _cross_energy(eta, mollified, bare)
        + _cross_energy(eta, bare, bare)
    )
    return max(value, 0.0)
