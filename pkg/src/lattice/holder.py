"""Weighted sup and positive-regularity Hölder norms on the lattice.

For α ∈ (0,1)

    ‖f‖_{α,w} = sup_x |f(x)|/w(x) + sup_{0<|x−y|≤1} |f(x)−f(y)| / (w(x)|x−y|^α)

and for α ∈ (1,2) the difference term is replaced by Σ_i ‖D_i f‖_{α−1,w} with
centred differences. Pairs are enumerated exactly over the window of radius
1 when n ≤ 256; above that only every second node serves as base point.
"""

import logging
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import ExponentError
from .grid import Field, Grid
from .weights import WeightSpec

logger = logging.getLogger(__name__)

EXACT_PAIR_LIMIT = 256


def default_pair_stride(grid: Grid) -> int:
    return 1 if grid.n <= EXACT_PAIR_LIMIT else 2


@lru_cache(maxsize=32)
def _window_offsets(n: int, h: float) -> Tuple[Tuple[int, int, float], ...]:
    """Integer offsets (di, dj, |d|) with 0 < |d| ≤ 1."""
    R = min(int(np.floor(1.0 / h + 1e-9)), n - 1)
    di, dj = np.meshgrid(np.arange(-R, R + 1), np.arange(-R, R + 1), indexing="ij")
    dist = h * np.sqrt(di**2 + dj**2)
    keep = (dist > 0) & (dist <= 1.0 + 1e-12)
    return tuple(zip(di[keep].tolist(), dj[keep].tolist(), dist[keep].tolist()))


def _spans(d: int, n: int, stride: int) -> Optional[Tuple[slice, slice]]:
    lo, hi = max(0, -d), n - max(0, d)
    if lo >= hi:
        return None
    return slice(lo, hi, stride), slice(lo + d, hi + d, stride)


def difference_sup(
    stack: np.ndarray,
    weight: np.ndarray,
    alpha: float,
    h: float,
    mask: np.ndarray,
    stride: int = 1,
) -> np.ndarray:
    """Sup of |f(y)−f(x)|/(w(x)|x−y|^α) over node pairs, for a batch of fields.

    Args:
        stack: Values of shape (B, n, n).
        weight: Weight at the nodes, shape (n, n) or (B, n, n).
        alpha: Hölder exponent in (0, 1).
        h: Grid spacing.
        mask: Admissible nodes; both ends of a pair must be admissible.
        stride: Base points are taken every ``stride`` nodes.

    Returns:
        Array of B suprema.
    """
    batch, n = stack.shape[0], stack.shape[-1]
    best = np.zeros(batch)
    for di, dj, dist in _window_offsets(n, h):
        rows = _spans(di, n, stride)
        cols = _spans(dj, n, stride)
        if rows is None or cols is None:
            continue
        valid = mask[rows[0], cols[0]] & mask[rows[1], cols[1]]
        if not valid.any():
            continue
        base = stack[:, rows[0], cols[0]]
        target = stack[:, rows[1], cols[1]]
        quotient = np.abs(target - base) / (weight[..., rows[0], cols[0]] * dist**alpha)
        quotient = np.where(valid, quotient, 0.0)
        best = np.maximum(best, quotient.reshape(batch, -1).max(axis=1))
    return best


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 2.0) or alpha == 1.0:
        raise ExponentError(
            f"Hölder exponent must lie in (0,1)∪(1,2), got {alpha}",
            details={"alpha": alpha},
        )


def holder_norm_stack(
    stack: np.ndarray,
    grid: Grid,
    alpha: float,
    weight: np.ndarray,
    collar: float = 0.0,
    pair_stride: Optional[int] = None,
) -> np.ndarray:
    """Positive-regularity Hölder norms of a batch of fields on one grid.

    Args:
        stack: Values of shape (B, n, n).
        grid: Common grid.
        alpha: Exponent in (0,1)∪(1,2).
        weight: Weight values, shape (n, n) or (B, n, n).
        collar: Width of the excluded boundary band.
        pair_stride: Base-point stride; defaults to exact enumeration up to
            n = 256 and every second node above.

    Returns:
        Array of B norms.
    """
    _check_alpha(alpha)
    stride = pair_stride or default_pair_stride(grid)
    mask = grid.interior_mask(collar)
    if not mask.any():
        return np.zeros(stack.shape[0])

    ratio = np.abs(stack) / weight
    sup_part = ratio[:, mask].max(axis=1)

    if alpha < 1.0:
        return sup_part + difference_sup(stack, weight, alpha, grid.spacing, mask, stride)

    total = sup_part
    for axis in (1, 2):
        derivative = np.gradient(stack, grid.spacing, axis=axis)
        total = total + holder_norm_stack(
            derivative, grid, alpha - 1.0, weight, collar, stride
        )
    return total


def weighted_sup_norm(f: Field, w: WeightSpec, collar: float = 0.0) -> float:
    """max over nodes outside the collar of |f(x)|/w(x).

    Args:
        f: Field to measure.
        w: Weight.
        collar: Width of the excluded boundary band.

    Returns:
        The weighted sup norm.
    """
    mask = f.grid.interior_mask(collar)
    if not mask.any():
        return 0.0
    ratio = np.abs(f.values) / w.on_grid(f.grid)
    return float(ratio[mask].max())


def holder_norm_positive(
    f: Field,
    alpha: float,
    w: WeightSpec,
    collar: float = 0.0,
    pair_stride: Optional[int] = None,
) -> float:
    """Weighted Hölder norm ‖f‖_{α,w} for α ∈ (0,1)∪(1,2).

    Args:
        f: Field to measure.
        alpha: Regularity exponent; α = 1 and values outside (0,2) are rejected.
        w: Weight.
        collar: Width of the excluded boundary band.
        pair_stride: Base-point stride override.

    Returns:
        The norm.

    Raises:
        ExponentError: If α is not admissible.
    """
    norms = holder_norm_stack(
        f.values[None], f.grid, alpha, w.on_grid(f.grid), collar, pair_stride
    )
    return float(norms[0])


def holder_norms(
    fields: List[Field],
    alpha: float,
    weights: List[WeightSpec],
    collar: float = 0.0,
    pair_stride: Optional[int] = None,
) -> np.ndarray:
    """Hölder norms of several fields on one grid, each with its own weight."""
    grid = fields[0].grid
    stack = np.stack([f.values for f in fields])
    weight = np.stack([w.on_grid(grid) for w in weights])
    return holder_norm_stack(stack, grid, alpha, weight, collar, pair_stride)
