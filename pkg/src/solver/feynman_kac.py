"""Feynman–Kac Monte Carlo oracle for ∂_t u = Δu + (ξ_ε − C)u.

    u(t, x) = E[u0(B_t)·exp(∫₀ᵗ (ξ_ε − C)(B_s) ds)],   B_0 = x,

with B generated by Δ, i.e. Gaussian increments of variance 2·dt per axis.
Fields are interpolated bilinearly and the time integral uses left points.
Walkers run in batches, each batch drawing from its own Philox substream.
"""

import logging
import math
from typing import NamedTuple, Tuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from ..exceptions import GridError, SolverError
from ..lattice import Field, Grid
from ..utils import timer

logger = logging.getLogger(__name__)

EXIT_WARNING_FRACTION = 0.01
DEFAULT_BATCH = 20_000
MAX_ATTEMPT_FACTOR = 10

Point = Tuple[float, float]


class FeynmanKacEstimate(NamedTuple):
    mean: float
    stderr: float
    exits: int
    walkers: int


def _interpolator(f: Field) -> RegularGridInterpolator:
    axis = f.grid.axis()
    return RegularGridInterpolator((axis, axis), f.values, method="linear")


def _inside(grid: Grid, positions: np.ndarray) -> np.ndarray:
    axis = grid.axis()
    lo, hi = axis[0], axis[-1]
    return np.all((positions >= lo) & (positions <= hi), axis=-1)


def _run_batch(
    rng: np.random.Generator,
    size: int,
    x: Point,
    steps: int,
    dt: float,
    potential: RegularGridInterpolator,
    initial: RegularGridInterpolator,
    grid: Grid,
) -> Tuple[np.ndarray, int]:
    """Path weights of the walkers that stayed in the box, and the exit count."""
    positions = np.tile(np.asarray(x, dtype=float), (size, 1))
    alive = np.ones(size, dtype=bool)
    exponent = np.zeros(size)
    scale = math.sqrt(2.0 * dt)
    for _ in range(steps):
        idx = np.flatnonzero(alive)
        exponent[idx] += potential(positions[idx]) * dt
        positions += scale * rng.standard_normal((size, 2))
        alive &= _inside(grid, positions)
    idx = np.flatnonzero(alive)
    weights = initial(positions[idx]) * np.exp(exponent[idx])
    return weights, size - idx.size


@timer
def feynman_kac(
    xi_eps: Field,
    C: float,
    u0: Field,
    t: float,
    x: Point,
    walkers: int,
    dt_walk: float,
    seed: int = 0,
    batch_size: int = DEFAULT_BATCH,
) -> FeynmanKacEstimate:
    """Monte Carlo estimate of u(t, x).

    Walkers leaving the box are discarded and replaced by fresh ones until
    ``walkers`` paths have completed; the exits are counted and more than 1%
    of them triggers a warning.

    Args:
        xi_eps: Mollified noise.
        C: Renormalisation constant.
        u0: Initial condition.
        t: Time, positive.
        x: Interior starting point.
        walkers: Number of completed paths.
        dt_walk: Path time step; rounded so that t is a whole number of steps.
        seed: Root seed of the walker substreams.
        batch_size: Walkers per substream.

    Returns:
        FeynmanKacEstimate with the sample mean and its standard error.

    Raises:
        SolverError: If t ≤ 0, the point is outside the box or nearly all walkers exit.
    """
    grid = u0.grid
    if xi_eps.grid != grid:
        raise GridError(f"potential on {xi_eps.grid} but initial condition on {grid}")
    if t <= 0:
        raise SolverError(f"Feynman–Kac needs t > 0, got {t}")
    if walkers < 2:
        raise SolverError(f"need at least two walkers, got {walkers}")
    if not _inside(grid, np.asarray([x], dtype=float))[0]:
        raise SolverError(f"starting point {x} lies outside the box")

    steps = max(1, int(round(t / dt_walk)))
    dt = t / steps
    potential = _interpolator(xi_eps - Field.constant(grid, C))
    initial = _interpolator(u0)
    root = np.random.SeedSequence(int(seed))
    logger.info(f"Feynman–Kac t={t} x={x} walkers={walkers} steps={steps} seed={seed}")

    collected = []
    completed = exits = attempts = 0
    while completed < walkers:
        if attempts >= MAX_ATTEMPT_FACTOR * walkers:
            raise SolverError(
                f"{exits} of {attempts} walkers left the box; enlarge L",
                details={"exits": exits, "attempts": attempts},
            )
        size = min(batch_size, walkers - completed)
        (child,) = root.spawn(1)
        rng = np.random.Generator(np.random.Philox(child))
        weights, lost = _run_batch(rng, size, x, steps, dt, potential, initial, grid)
        collected.append(weights)
        completed += weights.size
        exits += lost
        attempts += size

    if exits > EXIT_WARNING_FRACTION * attempts:
        logger.warning(
            f"{exits} of {attempts} Feynman–Kac walkers left the box "
            f"({100.0 * exits / attempts:.1f}%); the box is too small for t={t}"
        )

    samples = np.concatenate(collected)[:walkers]
    mean = float(samples.mean())
    stderr = float(samples.std(ddof=1) / math.sqrt(samples.size))
    return FeynmanKacEstimate(
        mean=mean, stderr=stderr, exits=exits, walkers=int(samples.size)
    )
