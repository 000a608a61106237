"""Spatial white noise on the lattice.

Node values are i.i.d. N(0, 1/h²), the cell-average representation of ξ:
for a test function φ the pairing Σ ξ(x)φ(x)h² has variance ≈ ‖φ‖²_{L²}.
Values are drawn row-major from a single Philox stream keyed by the seed,
so regeneration with the same seed is bit-identical.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import GridError
from ..lattice import Field, Grid

logger = logging.getLogger(__name__)

SEED_BITS = 64


def noise_generator(seed: int) -> np.random.Generator:
    """Counter-based generator keyed by a 64-bit seed."""
    if not 0 <= int(seed) < 2**SEED_BITS:
        raise ValueError(f"seed must be a 64-bit non-negative integer, got {seed}")
    return np.random.Generator(np.random.Philox(key=int(seed)))


@dataclass(frozen=True)
class NoiseSample:
    """A white-noise realisation and the seed that produced it."""

    field: Field
    seed: int

    @property
    def grid(self) -> Grid:
        return self.field.grid

    @classmethod
    def injected(cls, field: Field, seed: int = 0) -> "NoiseSample":
        """Wrap a prescribed field, e.g. ξ ≡ 0, as a noise sample."""
        return cls(field, seed)

    def coarsen(self) -> "NoiseSample":
        """Average 2×2 blocks into a sample on the grid with n/2 nodes.

        The block average of four N(0, 1/h²) values is N(0, 1/(2h)²), so the
        result is again white noise at the coarser spacing.
        """
        grid = self.grid
        if grid.n < 16:
            raise GridError("cannot coarsen below 8 points per axis")
        v = self.field.values
        blocks = v.reshape(grid.n // 2, 2, grid.n // 2, 2).mean(axis=(1, 3))
        return NoiseSample(Field(grid.coarsened(), blocks), self.seed)


def sample_white_noise(grid: Grid, seed: int) -> NoiseSample:
    """Sample white noise on a grid.

    Args:
        grid: Target lattice.
        seed: 64-bit seed of the Philox stream.

    Returns:
        NoiseSample with node variance 1/h².
    """
    rng = noise_generator(seed)
    values = rng.standard_normal(grid.shape) / grid.spacing
    logger.debug(f"Sampled white noise n={grid.n} seed={seed}")
    return NoiseSample(Field(grid, values), int(seed))
