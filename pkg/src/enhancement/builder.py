"""Assembly of the stochastic enhancement (ξ_ε, Y_ε, ∇Y_ε, Z_ε, C_ε, F*ξ_ε).

Y_ε, both gradient components and F*ξ_ε come from one convolution engine
applied to the same mollified noise, so ∇Y_ε = (∇G)*ξ_ε holds exactly at the
grid level and Z_ε = |∇Y_ε|² − C_ε is centred by construction.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np

from ..exceptions import FieldFormatError
from ..kernels import GreenKernel, QuinticCutoff, build_green
from ..lattice import Field, Grid, read_fields, write_fields
from ..stochastics import PROFILE_NAME, MollifierSpec, NoiseSample, mollify
from ..utils import timer
from .renormalisation import c_epsilon_quadrature

logger = logging.getLogger(__name__)

FIELD_NAMES = ("xi_eps", "Y", "dY_dx1", "dY_dx2", "Z", "F_xi")


@dataclass(frozen=True, eq=False)
class Enhancement:
    """All stochastic inputs of the transformed equation for one (seed, ε)."""

    epsilon: float
    xi_eps: Field
    Y: Field
    gradY: Tuple[Field, Field]
    Z: Field
    C_eps: float
    F_xi: Field
    seed: int

    @property
    def grid(self) -> Grid:
        return self.Y.grid

    def as_fields(self) -> Dict[str, Field]:
        values = (self.xi_eps, self.Y, self.gradY[0], self.gradY[1], self.Z, self.F_xi)
        return dict(zip(FIELD_NAMES, values))

    def manifest(self) -> Dict[str, object]:
        return {
            "epsilon": repr(float(self.epsilon)),
            "C_eps": repr(float(self.C_eps)),
            "seed": self.seed,
            "mollifier": PROFILE_NAME,
        }


@dataclass(frozen=True, eq=False)
class TransformCoefficients:
    """Coefficients of ∂_t v = Δv + g·v + h·∇v, v(0) = f."""

    g: Field
    h1: Field
    h2: Field
    f: Field


@timer
def build_enhancement(
    xi: NoiseSample,
    epsilon: float,
    green: Optional[GreenKernel] = None,
    cutoff: Optional[QuinticCutoff] = None,
) -> Enhancement:
    """Build the enhancement of one noise sample at scale ε.

    Args:
        xi: Noise sample.
        epsilon: Mollifier scale, at least 2h.
        green: Prebuilt Green kernel on the noise grid.
        cutoff: Cutoff used when the kernel has to be built.

    Returns:
        The enhancement, with C_ε from the quadrature.

    Raises:
        ResolutionError: If ε < 2h or h > 1/8.
    """
    grid = xi.grid
    xi_eps = mollify(xi, MollifierSpec(epsilon))
    green = green or build_green(grid, cutoff)
    convolvers = green.convolvers

    Y = convolvers.G(xi_eps)
    grad1 = convolvers.grad[0](xi_eps)
    grad2 = convolvers.grad[1](xi_eps)
    F_xi = convolvers.F(xi_eps)
    C_eps = c_epsilon_quadrature(epsilon, grid, green.cutoff)
    Z = Field(grid, grad1.values**2 + grad2.values**2 - C_eps)

    logger.info(
        f"Built enhancement seed={xi.seed} ε={epsilon} n={grid.n} C_ε={C_eps:.6f}"
    )
    return Enhancement(
        epsilon=float(epsilon),
        xi_eps=xi_eps,
        Y=Y,
        gradY=(grad1, grad2),
        Z=Z,
        C_eps=C_eps,
        F_xi=F_xi,
        seed=int(xi.seed),
    )


def transform_coefficients(enh: Enhancement, u0: Field) -> TransformCoefficients:
    """g = Z_ε + F*ξ_ε, h^{(i)} = 2·D_{x_i}Y_ε and f = u0·e^{−Y_ε}.

    With v = u·e^{−Y_ε} and ΔY_ε = −ξ_ε + F*ξ_ε these turn the mollified
    equation into ∂_t v = Δv + g·v + h·∇v.
    """
    return TransformCoefficients(
        g=enh.Z + enh.F_xi,
        h1=2.0 * enh.gradY[0],
        h2=2.0 * enh.gradY[1],
        f=u0 * enh.Y.map(lambda y: np.exp(-y)),
    )


def save_enhancement(enh: Enhancement, directory: Union[str, Path]) -> Path:
    """Write the bundle as PAMF fields plus a manifest."""
    root = write_fields(directory, enh.as_fields(), enh.manifest())
    logger.info(f"Saved enhancement seed={enh.seed} ε={enh.epsilon} to {root}")
    return root


def load_enhancement(directory: Union[str, Path]) -> Enhancement:
    """Read a bundle written by :func:`save_enhancement`."""
    fields, manifest = read_fields(directory)
    missing = [name for name in FIELD_NAMES if name not in fields]
    if missing:
        raise FieldFormatError(
            f"enhancement directory lacks fields {missing}", path=str(directory)
        )
    try:
        epsilon = float(manifest["epsilon"])
        C_eps = float(manifest["C_eps"])
        seed = int(manifest["seed"])
    except (KeyError, ValueError) as e:
        raise FieldFormatError(
            f"invalid enhancement manifest: {e}", path=str(directory)
        ) from e
    return Enhancement(
        epsilon=epsilon,
        xi_eps=fields["xi_eps"],
        Y=fields["Y"],
        gradY=(fields["dY_dx1"], fields["dY_dx2"]),
        Z=fields["Z"],
        C_eps=C_eps,
        F_xi=fields["F_xi"],
        seed=seed,
    )
