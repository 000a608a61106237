"""Besov Module

Wavelet pyramids and the weighted Hölder norms and regularity estimates read
off their coefficients.
"""

from .norms import (
    LevelRow,
    RegularityEstimate,
    level_table,
    neg_holder_norm,
    pos_holder_norm,
    regularity_estimate,
)
from .wavelets import (
    ORIENTATIONS,
    CoefficientPyramid,
    WaveletBasis,
    analyze,
    daubechies_filter,
    synthesize,
)

__all__ = [
    "ORIENTATIONS",
    "CoefficientPyramid",
    "LevelRow",
    "RegularityEstimate",
    "WaveletBasis",
    "analyze",
    "daubechies_filter",
    "level_table",
    "neg_holder_norm",
    "pos_holder_norm",
    "regularity_estimate",
    "synthesize",
]
