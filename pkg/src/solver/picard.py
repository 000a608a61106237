"""Mild-solution Picard solver for the transformed equation

    ∂_t v = Δv + g·v + h^{(i)}·D_{x_i}v,   v(0) = f.

The fixed-point map is

    M(v)(t) = e^{tΔ}f + Σ_{s<t} e^{(t−s)Δ}(v_s·g + D_{x_i}v_s·h^{(i)})·dt

over the left points s = 0, dt, …, t−dt with v_0 = f. The sum is evaluated
by W_{k+1} = e^{dtΔ}(W_k + dt·N(v_{s_k})), W_0 = f, kept in Fourier space on
the padded grid so that it equals the sum up to rounding.
"""

import dataclasses
import logging
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..config import SolveConfig
from ..enhancement import Enhancement, transform_coefficients
from ..exceptions import MeshMismatchError, PicardConvergenceError
from ..kernels import PaddedHeatFlow
from ..lattice import Field, Grid
from ..utils import safe_divide, timer
from .direct import recorded_steps
from .spacetime import NormKind, SpaceTimeField, spacetime_norm

logger = logging.getLogger(__name__)

HOLDER_MONITOR_LIMIT = 256

FrameHook = Callable[[int, np.ndarray, np.ndarray], None]


@dataclass(frozen=True)
class _Coefficients:
    g: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    f: np.ndarray
    spacing: float

    def forcing(self, v: np.ndarray) -> np.ndarray:
        d1, d2 = np.gradient(v, self.spacing)
        return v * self.g + d1 * self.h1 + d2 * self.h2


class TransformedSolution(NamedTuple):
    """Fixed point v, the recovered u = v·e^{Y} and the Picard increments."""

    v: SpaceTimeField
    u: SpaceTimeField
    residual_history: Tuple[float, ...]

    @property
    def iterations(self) -> int:
        return len(self.residual_history)


def _check_inputs(grid: Grid, *fields: Field) -> None:
    for f in fields:
        if f.grid != grid:
            raise MeshMismatchError(f"coefficient on {f.grid}, expected {grid}")


def step_times(cfg: SolveConfig) -> Tuple[float, ...]:
    """The solver mesh t_k = k·dt, k = 1 … M."""
    return tuple(k * cfg.dt for k in range(1, cfg.steps + 1))


def _picard_sweep(
    stack: np.ndarray,
    coeffs: _Coefficients,
    flow: PaddedHeatFlow,
    on_frame: Optional[FrameHook] = None,
) -> None:
    """Overwrite ``stack`` holding v on the mesh by M(v).

    ``on_frame(k, new, old)`` sees each frame before it is replaced.
    """
    dt = flow.dt
    spectrum = flow.forward(coeffs.f)
    source = coeffs.f
    for k in range(stack.shape[0]):
        spectrum = flow.step(spectrum + flow.forward(dt * coeffs.forcing(source)))
        new = flow.crop(spectrum)
        old = stack[k].copy()
        if on_frame is not None:
            on_frame(k, new, old)
        stack[k] = new
        source = old


def _free_evolution(coeffs: _Coefficients, flow: PaddedHeatFlow, steps: int) -> np.ndarray:
    """t_k ↦ e^{t_kΔ}f on the mesh."""
    stack = np.empty((steps,) + coeffs.f.shape)
    spectrum = flow.forward(coeffs.f)
    for k in range(steps):
        spectrum = flow.step(spectrum)
        stack[k] = flow.crop(spectrum)
    return stack


def picard_map(
    v: SpaceTimeField, g: Field, h1: Field, h2: Field, f: Field, cfg: SolveConfig
) -> SpaceTimeField:
    """One application of the fixed-point map.

    Args:
        v: Trajectory on the mesh t_k = k·dt, k = 1 … M.
        g: Potential coefficient.
        h1: Drift coefficient of D_{x₁}v.
        h2: Drift coefficient of D_{x₂}v.
        f: Initial datum.
        cfg: Solver configuration.

    Returns:
        M(v) on the same mesh.

    Raises:
        MeshMismatchError: If grids or time meshes disagree.
    """
    grid = f.grid
    _check_inputs(grid, g, h1, h2)
    if len(v) and v.grid != grid:
        raise MeshMismatchError(f"trajectory on {v.grid}, expected {grid}")
    times = step_times(cfg)
    if len(v) != len(times) or not np.allclose(v.times, times, rtol=1e-12, atol=0.0):
        raise MeshMismatchError(
            f"trajectory has {len(v)} frames, the mesh of dt={cfg.dt}, T={cfg.T} "
            f"has {len(times)}"
        )
    coeffs = _Coefficients(g.values, h1.values, h2.values, f.values, grid.spacing)
    stack = v.stack()
    _picard_sweep(stack, coeffs, PaddedHeatFlow(grid, cfg.dt))
    return SpaceTimeField.from_stack(v.times, stack, grid, cfg.kappa, cfg.ell)


def monitor_norm(cfg: SolveConfig, grid: Grid) -> NormKind:
    """Norm used for Picard increments; ``auto`` picks the Hölder norm up to n = 256."""
    if cfg.picard_norm == "auto":
        return "holder" if grid.n <= HOLDER_MONITOR_LIMIT else "sup"
    return "sup" if cfg.picard_norm == "sup" else "holder"


def picard_contraction_ratios(history: Sequence[float]) -> List[float]:
    """Successive ratios of Picard increments."""
    return [safe_divide(b, a, default=float("inf")) for a, b in zip(history, history[1:])]


def _monitored_norm(
    mesh: List[float],
    frames: List[np.ndarray],
    grid: Grid,
    cfg: SolveConfig,
    collar: float,
    norm: NormKind,
) -> float:
    trajectory = SpaceTimeField.from_stack(mesh, np.stack(frames), grid, cfg.kappa, cfg.ell)
    return spacetime_norm(trajectory, cfg.norm_r, cfg.ell, cfg.T, cfg.kappa, collar, norm)


@timer
def _iterate(
    coeffs: _Coefficients, grid: Grid, cfg: SolveConfig, collar: float
) -> Tuple[np.ndarray, List[float]]:
    flow = PaddedHeatFlow(grid, cfg.dt)
    stack = _free_evolution(coeffs, flow, cfg.steps)
    times = step_times(cfg)
    monitored = {k - 1 for k in recorded_steps(cfg)}
    norm = monitor_norm(cfg, grid)
    history: List[float] = []

    for iteration in range(1, cfg.picard_max_iter + 1):
        increments: List[np.ndarray] = []
        iterates: List[np.ndarray] = []

        def collect(k: int, new: np.ndarray, old: np.ndarray) -> None:
            if k in monitored:
                increments.append(new - old)
                iterates.append(new.copy())

        _picard_sweep(stack, coeffs, flow, collect)
        mesh = [times[k] for k in sorted(monitored)]
        delta = _monitored_norm(mesh, increments, grid, cfg, collar, norm)
        size = _monitored_norm(mesh, iterates, grid, cfg, collar, norm)
        residual = safe_divide(delta, size, default=0.0)
        history.append(residual)
        logger.debug(f"Picard iteration {iteration}: relative increment {residual:.3e}")
        if residual < cfg.picard_tol:
            return stack, history

    raise PicardConvergenceError(
        f"Picard iteration did not reach tol={cfg.picard_tol} in "
        f"{cfg.picard_max_iter} iterations (T={cfg.T}); shrink T and restart",
        residual_history=history,
    )


def solve_transformed(
    enh: Enhancement,
    u0: Field,
    cfg: SolveConfig,
    collar: float = 0.0,
    keep_all_frames: bool = False,
) -> TransformedSolution:
    """Solve the transformed equation by Picard iteration and recover u.

    Args:
        enh: Enhancement supplying g = Z_ε + F*ξ_ε, h^{(i)} = 2·D_{x_i}Y_ε.
        u0: Initial condition of u; v starts from f = u0·e^{−Y_ε}.
        cfg: Solver configuration.
        collar: Boundary band excluded from the increment norm.
        keep_all_frames: Return every step instead of every ``frame_stride``-th.

    Returns:
        TransformedSolution with v, u = v·e^{Y_ε} and the relative increments.

    Raises:
        PicardConvergenceError: If picard_max_iter sweeps do not reach picard_tol.
    """
    grid = u0.grid
    _check_inputs(grid, enh.Y)
    tc = transform_coefficients(enh, u0)
    coeffs = _Coefficients(
        tc.g.values, tc.h1.values, tc.h2.values, tc.f.values, grid.spacing
    )
    logger.info(
        f"Picard solve seed={enh.seed} ε={enh.epsilon} n={grid.n} steps={cfg.steps} "
        f"norm={monitor_norm(cfg, grid)}"
    )

    stack, history = _iterate(coeffs, grid, cfg, collar)
    logger.info(f"Picard converged after {len(history)} iterations")

    times = step_times(cfg)
    keep = range(len(times)) if keep_all_frames else [k - 1 for k in recorded_steps(cfg)]
    growth = np.exp(enh.Y.values)
    v_frames = tuple(Field(grid, stack[k]) for k in keep)
    u_frames = tuple(Field(grid, stack[k] * growth) for k in keep)
    kept_times = tuple(times[k] for k in keep)
    return TransformedSolution(
        v=SpaceTimeField(kept_times, v_frames, cfg.kappa, cfg.ell),
        u=SpaceTimeField(kept_times, u_frames, cfg.kappa, cfg.ell),
        residual_history=tuple(history),
    )


def solve_transformed_windowed(
    enh: Enhancement,
    u0: Field,
    cfg: SolveConfig,
    window: float,
    collar: float = 0.0,
) -> TransformedSolution:
    """Chain Picard solves over consecutive windows of length ``window``.

    Each window restarts from the final u of the previous one; the returned
    times are absolute and the residual history concatenates all windows.
    """
    windows = max(1, int(round(cfg.T / window)))
    sub_cfg = dataclasses.replace(cfg, T=cfg.T / windows)
    offset = 0.0
    start = u0
    times: List[float] = []
    v_frames: List[Field] = []
    u_frames: List[Field] = []
    history: List[float] = []
    for index in range(windows):
        part = solve_transformed(enh, start, sub_cfg, collar)
        times.extend(offset + t for t in part.v.times)
        v_frames.extend(part.v.frames)
        u_frames.extend(part.u.frames)
        history.extend(part.residual_history)
        offset += sub_cfg.steps * sub_cfg.dt
        start = part.u.final
        logger.debug(f"Window {index + 1}/{windows} done after {part.iterations} sweeps")
    return TransformedSolution(
        v=SpaceTimeField(tuple(times), tuple(v_frames), cfg.kappa, cfg.ell),
        u=SpaceTimeField(tuple(times), tuple(u_frames), cfg.kappa, cfg.ell),
        residual_history=tuple(history),
    )
