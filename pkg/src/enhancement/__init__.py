"""Enhancement Module

Builds the stochastic enhancement of a noise sample and the deterministic
quadratures for the renormalisation constant and the second-chaos variance.
"""

from .builder import (
    Enhancement,
    TransformCoefficients,
    build_enhancement,
    load_enhancement,
    save_enhancement,
    transform_coefficients,
)
from .renormalisation import (
    ETA_PROFILE,
    MollifiedGreen,
    c_epsilon_quadrature,
    eta_field,
    gradient_kernels,
    mollified_green,
    z_covariance_quadrature,
    z_difference_variance,
)

__all__ = [
    "ETA_PROFILE",
    "Enhancement",
    "MollifiedGreen",
    "TransformCoefficients",
    "build_enhancement",
    "c_epsilon_quadrature",
    "eta_field",
    "gradient_kernels",
    "load_enhancement",
    "mollified_green",
    "save_enhancement",
    "transform_coefficients",
    "z_covariance_quadrature",
    "z_difference_variance",
]
