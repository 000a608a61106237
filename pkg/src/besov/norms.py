"""Weighted Hölder norms read off wavelet coefficients.

For α < 0 with r > |α|

    ‖f‖_{α,w} ≈ sup_{n ≤ n_max} sup_{ψ,x} |⟨f, ψ^n_x⟩| / (w(x)·2^{−nd/2−nα})
               + sup_x |⟨f, φ^0_x⟩| / w(x),

with d = 2, the suprema restricted to usable coefficients and x the support
centre. The same expression with α ∈ (0, 1) gives the positive-α variant.
Inverting it level by level yields a regularity estimate.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import ExponentError, WaveletError
from ..lattice import WeightSpec
from ..utils import fit_slope
from .wavelets import CoefficientPyramid

logger = logging.getLogger(__name__)

DIMENSION = 2
MIN_FIT_LEVELS = 4


@dataclass(frozen=True)
class LevelRow:
    """Weighted sup of one level and the weight where it is attained."""

    level: int
    sup_coeff: float
    weight_at_argmax: float


@dataclass(frozen=True)
class RegularityEstimate:
    alpha: float
    residual: float
    levels: Tuple[int, ...]


def _weighted_level_sup(
    p: CoefficientPyramid, level: int, w: WeightSpec
) -> Optional[Tuple[float, float]]:
    """(max |c|/w(x), w at the argmax) over usable coefficients, or None."""
    mask = p.usable_mask(level)
    if not mask.any():
        return None
    weight = p.weight_at(level, w)
    magnitude = np.max(np.stack([np.abs(d) for d in p.details[level]]), axis=0)
    ratio = np.where(mask, magnitude / weight, -np.inf)
    flat = int(np.argmax(ratio))
    return float(ratio.flat[flat]), float(weight.flat[flat])


def _scaling_sup(p: CoefficientPyramid, w: WeightSpec) -> float:
    mask = p.usable_mask(0)
    if not mask.any():
        return 0.0
    ratio = np.abs(p.scaling) / p.weight_at(0, w)
    return float(ratio[mask].max())


def level_table(p: CoefficientPyramid, w: WeightSpec) -> List[LevelRow]:
    """Per-level weighted sups for the levels 0 … n_max with usable coefficients."""
    rows = []
    for level in range(p.max_level + 1):
        sup = _weighted_level_sup(p, level, w)
        if sup is not None:
            rows.append(LevelRow(level, sup[0], sup[1]))
    return rows


def _coefficient_norm(p: CoefficientPyramid, alpha: float, w: WeightSpec) -> float:
    detail = 0.0
    for row in level_table(p, w):
        detail = max(detail, row.sup_coeff * 2.0 ** (row.level * (DIMENSION / 2 + alpha)))
    return detail + _scaling_sup(p, w)


def neg_holder_norm(p: CoefficientPyramid, alpha: float, w: WeightSpec) -> float:
    """Weighted negative Hölder norm from wavelet coefficients.

    Args:
        p: Coefficient pyramid.
        alpha: Regularity, negative with |α| < r.
        w: Weight.

    Returns:
        The norm over levels 0 … n_max.

    Raises:
        ExponentError: If α ≥ 0.
        WaveletError: If the basis order r ≤ |α|.
    """
    if alpha >= 0:
        raise ExponentError(f"negative-regularity norm needs α < 0, got {alpha}")
    if p.basis.order <= abs(alpha):
        raise WaveletError(
            f"wavelet order r={p.basis.order} must exceed |α|={abs(alpha)}",
            details={"alpha": alpha, "order": p.basis.order},
        )
    return _coefficient_norm(p, alpha, w)


def pos_holder_norm(p: CoefficientPyramid, alpha: float, w: WeightSpec) -> float:
    """Coefficient norm with α ∈ (0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise ExponentError(f"positive coefficient norm needs α ∈ (0,1), got {alpha}")
    return _coefficient_norm(p, alpha, w)


def regularity_estimate(
    p: CoefficientPyramid,
    w: WeightSpec,
    min_level: int = 0,
    max_level: Optional[int] = None,
) -> RegularityEstimate:
    """Fit α̂ from the decay of the per-level weighted sups.

    The sup of level n behaves like 2^{−n(d/2+α)}, so the least-squares slope
    σ of log₂ sup against n gives α̂ = −σ − d/2.

    Args:
        p: Coefficient pyramid.
        w: Weight.
        min_level: Coarsest level entering the fit.
        max_level: Finest level entering the fit; n_max by default.

    Returns:
        RegularityEstimate with α̂, the RMS residual of the fit and the levels used.

    Raises:
        WaveletError: With fewer than four usable levels.
    """
    top = p.max_level if max_level is None else min(max_level, p.max_level)
    rows = [
        row
        for row in level_table(p, w)
        if min_level <= row.level <= top and row.sup_coeff > 0
    ]
    if len(rows) < MIN_FIT_LEVELS:
        raise WaveletError(
            f"regularity fit needs ≥ {MIN_FIT_LEVELS} usable levels, got {len(rows)}",
            details={"levels": [row.level for row in rows]},
        )
    fit = fit_slope([row.level for row in rows], [np.log2(row.sup_coeff) for row in rows])
    alpha = -fit.slope - DIMENSION / 2
    levels = [row.level for row in rows]
    logger.debug(f"Regularity estimate α̂={alpha:.4f} over levels {levels}")
    return RegularityEstimate(
        alpha=float(alpha), residual=fit.residual, levels=tuple(row.level for row in rows)
    )
