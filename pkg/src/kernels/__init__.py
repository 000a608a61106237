"""Kernels Module

The cut-off Green kernel, zero-padded spectral convolution, the heat
semigroup and singular-kernel order norms.
"""

from .convolution import (
    PaddedHeatFlow,
    SpectralConvolver,
    centred_gradient,
    convolve,
    direct_convolve,
    heat_semigroup,
    heat_semigroup_values,
    laplacian_5pt,
)
from .green import DEFAULT_CUTOFF, GreenKernel, QuinticCutoff, build_green
from .order import (
    KernelOrderNorm,
    convolution_order_constant,
    kernel_order_norm,
    product_order_constant,
)

__all__ = [
    "DEFAULT_CUTOFF",
    "GreenKernel",
    "KernelOrderNorm",
    "PaddedHeatFlow",
    "QuinticCutoff",
    "SpectralConvolver",
    "build_green",
    "centred_gradient",
    "convolution_order_constant",
    "convolve",
    "direct_convolve",
    "heat_semigroup",
    "heat_semigroup_values",
    "kernel_order_norm",
    "laplacian_5pt",
    "product_order_constant",
]
