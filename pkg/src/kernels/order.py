"""Singular-kernel order norms.

A kernel K is of order ζ when |D^k K(x)| ≲ |x|^{ζ−|k|} near the origin;
‖K‖_{ζ;m} is the best constant over |k| ≤ m, measured here on the grid with
centred-difference derivatives and without the nodes |x| ≤ 2h, where the
difference stencils would reach the origin.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..exceptions import ExponentError
from ..lattice import Field
from ..utils import safe_divide
from .convolution import convolve

logger = logging.getLogger(__name__)

EXCLUSION_CELLS = 2


@dataclass(frozen=True)
class KernelOrderNorm:
    zeta: float
    m: int
    value: float


def _derivatives(K: Field, m: int) -> List[Tuple[int, np.ndarray]]:
    """(|k|, D^k K) for all multi-indices with |k| ≤ m."""
    h = K.grid.spacing
    out = [(0, K.values)]
    if m >= 1:
        d1, d2 = np.gradient(K.values, h)
        out += [(1, d1), (1, d2)]
        if m >= 2:
            d11, d12 = np.gradient(d1, h)
            d22 = np.gradient(d2, h, axis=1)
            out += [(2, d11), (2, d12), (2, d22)]
    return out


def kernel_order_norm(K: Field, zeta: float, m: int = 0) -> KernelOrderNorm:
    """Measure ‖K‖_{ζ;m} = max_{|k|≤m} sup_{|x|>2h} |x|^{|k|−ζ}·|D^k K(x)|.

    Args:
        K: Kernel tabulated around the origin node.
        zeta: Order exponent.
        m: Number of derivatives, 0, 1 or 2.

    Returns:
        KernelOrderNorm holding the measured constant.
    """
    if m not in (0, 1, 2):
        raise ExponentError(f"derivative order must be 0, 1 or 2, got {m}")
    r = K.grid.radius()
    admissible = r > EXCLUSION_CELLS * K.grid.spacing * (1.0 + 1e-12)
    value = 0.0
    for order, derivative in _derivatives(K, m):
        scaled = r[admissible] ** (order - zeta) * np.abs(derivative[admissible])
        value = max(value, float(scaled.max()))
    return KernelOrderNorm(zeta=float(zeta), m=int(m), value=value)


def product_order_constant(K1: Field, zeta1: float, K2: Field, zeta2: float) -> float:
    """Smallest C with ‖K₁K₂‖_{ζ₁+ζ₂;0} ≤ C·‖K₁‖_{ζ₁;0}·‖K₂‖_{ζ₂;0} on the grid."""
    product = kernel_order_norm(K1 * K2, zeta1 + zeta2).value
    factors = kernel_order_norm(K1, zeta1).value * kernel_order_norm(K2, zeta2).value
    return safe_divide(product, factors)


def convolution_order_constant(
    K1: Field, zeta1: float, K2: Field, zeta2: float
) -> float:
    """Smallest C with ‖K₁*K₂‖_{ζ₁+ζ₂+2;0} ≤ C·‖K₁‖_{ζ₁;0}·‖K₂‖_{ζ₂;0}.

    Meaningful when ζ₁+ζ₂+2 < 0; the convolution is the zero-padded one, so
    kernels supported in the box are convolved exactly up to quadrature.
    """
    zeta = zeta1 + zeta2 + 2.0
    if zeta >= 0:
        raise ExponentError(
            f"convolution order ζ₁+ζ₂+2 = {zeta:g} must be negative",
            details={"zeta1": zeta1, "zeta2": zeta2},
        )
    folded = kernel_order_norm(convolve(K1, K2), zeta).value
    factors = kernel_order_norm(K1, zeta1).value * kernel_order_norm(K2, zeta2).value
    return safe_divide(folded, factors)
