"""Lattice Module

Grids, scalar fields, weight families, weighted Hölder norms and the PAMF
field format.
"""

from .grid import Field, Grid, centred_gradient, make_grid
from .holder import holder_norm_positive, holder_norms, weighted_sup_norm
from .pamf import read_field, read_fields, write_field, write_fields
from .weights import (
    WeightSpec,
    eval_weight,
    weight_transfer_bound,
    weight_transfer_ratio,
)

__all__ = [
    "Field",
    "Grid",
    "WeightSpec",
    "centred_gradient",
    "eval_weight",
    "holder_norm_positive",
    "holder_norms",
    "make_grid",
    "read_field",
    "read_fields",
    "weight_transfer_bound",
    "weight_transfer_ratio",
    "weighted_sup_norm",
    "write_field",
    "write_fields",
]
