"""Solver Module

Direct Strang splitting, the Picard fixed point of the transformed equation,
the Feynman–Kac oracle and the weighted spacetime norm.
"""

from ..config import SolveConfig
from .direct import recorded_steps, solve_direct
from .feynman_kac import FeynmanKacEstimate, feynman_kac
from .picard import (
    TransformedSolution,
    monitor_norm,
    picard_contraction_ratios,
    picard_map,
    solve_transformed,
    solve_transformed_windowed,
    step_times,
)
from .spacetime import (
    NormKind,
    SpaceTimeField,
    check_same_mesh,
    load_trajectory,
    save_trajectory,
    spacetime_norm,
)

__all__ = [
    "FeynmanKacEstimate",
    "NormKind",
    "SolveConfig",
    "SpaceTimeField",
    "TransformedSolution",
    "check_same_mesh",
    "feynman_kac",
    "load_trajectory",
    "monitor_norm",
    "picard_contraction_ratios",
    "picard_map",
    "recorded_steps",
    "save_trajectory",
    "solve_direct",
    "solve_transformed",
    "solve_transformed_windowed",
    "spacetime_norm",
    "step_times",
]
