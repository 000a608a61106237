"""Stochastics Module

White-noise sampling on the lattice and mollification by the standard bump.
"""

from .mollifier import (
    PROFILE_NAME,
    MollifierSpec,
    bump_field,
    bump_l2_norm_squared,
    bump_normalisation,
    bump_profile,
    mollify,
)
from .noise import NoiseSample, noise_generator, sample_white_noise

__all__ = [
    "PROFILE_NAME",
    "MollifierSpec",
    "NoiseSample",
    "bump_field",
    "bump_l2_norm_squared",
    "bump_normalisation",
    "bump_profile",
    "mollify",
    "noise_generator",
    "sample_white_noise",
]
