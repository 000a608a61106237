"""Trajectories and the blow-up weighted spacetime norm.

    ⫼v⫼_{ℓ,T} = sup_{0<t≤T} t^{1−κ}·‖v_t‖_{r, e_{ℓ+t}}

The exponential weight grows with time, which is what allows a fixed point
on unbounded space.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import FieldFormatError, MeshMismatchError, SolverError
from ..lattice import (
    Field,
    Grid,
    WeightSpec,
    holder_norms,
    read_fields,
    weighted_sup_norm,
    write_fields,
)

logger = logging.getLogger(__name__)

NormKind = Literal["holder", "sup"]
FRAME_BATCH = 8


@dataclass(frozen=True, eq=False)
class SpaceTimeField:
    """Frames v(t_1), …, v(t_M) on one grid at strictly increasing times."""

    times: Tuple[float, ...]
    frames: Tuple[Field, ...]
    kappa: float
    ell: float

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "frames", tuple(self.frames))
        if len(times) != len(self.frames):
            raise MeshMismatchError(
                f"{len(times)} times for {len(self.frames)} frames",
                details={"times": len(times), "frames": len(self.frames)},
            )
        if any(t <= 0 for t in times[:1]) or any(b <= a for a, b in zip(times, times[1:])):
            raise MeshMismatchError("frame times must be positive and strictly increasing")
        if any(frame.grid != self.frames[0].grid for frame in self.frames[1:]):
            raise MeshMismatchError("all frames must live on one grid")

    @classmethod
    def from_stack(
        cls, times: Sequence[float], stack: np.ndarray, grid: Grid, kappa: float, ell: float
    ) -> "SpaceTimeField":
        return cls(tuple(times), tuple(Field(grid, v) for v in stack), kappa, ell)

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def grid(self) -> Grid:
        if not self.frames:
            raise SolverError("empty trajectory has no grid")
        return self.frames[0].grid

    @property
    def final(self) -> Field:
        return self.frames[-1]

    def stack(self) -> np.ndarray:
        """Frame values as an (M, n, n) array."""
        return np.stack([frame.values for frame in self.frames])

    def __sub__(self, other: "SpaceTimeField") -> "SpaceTimeField":
        check_same_mesh(self, other)
        frames = tuple(a - b for a, b in zip(self.frames, other.frames))
        return SpaceTimeField(self.times, frames, self.kappa, self.ell)

    def frame_at(self, t: float, tol: float = 1e-12) -> Field:
        """Frame recorded at time t."""
        for time, frame in zip(self.times, self.frames):
            if abs(time - t) <= tol * max(1.0, abs(t)):
                return frame
        raise MeshMismatchError(f"no frame at t={t}", details={"times": list(self.times)})

    def restricted(self, T: float) -> "SpaceTimeField":
        """Frames with t ≤ T."""
        keep = [i for i, t in enumerate(self.times) if t <= T * (1 + 1e-12)]
        return SpaceTimeField(
            tuple(self.times[i] for i in keep),
            tuple(self.frames[i] for i in keep),
            self.kappa,
            self.ell,
        )


def check_same_mesh(a: SpaceTimeField, b: SpaceTimeField) -> None:
    """Raise unless both trajectories share grid and times."""
    if len(a) != len(b) or not np.allclose(a.times, b.times, rtol=1e-12, atol=0.0):
        raise MeshMismatchError("trajectories use different time meshes")
    if len(a) and a.grid != b.grid:
        raise MeshMismatchError(f"trajectories live on {a.grid} and {b.grid}")


def spacetime_norm(
    v: SpaceTimeField,
    r: float,
    ell: float,
    T: float,
    kappa: float,
    collar: float = 0.0,
    norm: NormKind = "holder",
    pair_stride: Optional[int] = None,
) -> float:
    """max over frames t ≤ T of t^{1−κ}·‖v_t‖_{r, e_{ℓ+t}}.

    Args:
        v: Trajectory.
        r: Hölder exponent in (0,1)∪(1,2).
        ell: Initial weight rate ℓ.
        T: Final time.
        kappa: Blow-up exponent κ.
        collar: Width of the excluded boundary band.
        norm: ``"holder"`` for the full norm, ``"sup"`` for its weighted-sup part.
        pair_stride: Base-point stride of the Hölder difference term.

    Returns:
        The norm.

    Raises:
        SolverError: If no frame lies in (0, T].
    """
    frames = [(t, f) for t, f in zip(v.times, v.frames) if t <= T * (1 + 1e-12)]
    if not frames:
        raise SolverError("spacetime norm of an empty trajectory")
    best = 0.0
    for start in range(0, len(frames), FRAME_BATCH):
        batch = frames[start : start + FRAME_BATCH]
        weights = [WeightSpec.exponential(ell + t) for t, _ in batch]
        if norm == "sup":
            values = [weighted_sup_norm(f, w, collar) for (_, f), w in zip(batch, weights)]
        else:
            values = list(
                holder_norms([f for _, f in batch], r, weights, collar, pair_stride)
            )
        for (t, _), value in zip(batch, values):
            best = max(best, t ** (1.0 - kappa) * float(value))
    return best


def save_trajectory(
    v: SpaceTimeField,
    directory: Union[str, Path],
    T: Optional[float] = None,
    extra: Optional[Dict[str, object]] = None,
) -> Path:
    """Write numbered PAMF frames and a manifest with times, κ, ℓ and T."""
    fields = {f"frame_{i:04d}": frame for i, frame in enumerate(v.frames)}
    manifest: Dict[str, object] = {
        "times": ", ".join(repr(t) for t in v.times),
        "kappa": repr(float(v.kappa)),
        "ell": repr(float(v.ell)),
        "T": repr(float(T if T is not None else v.times[-1])),
    }
    manifest.update(extra or {})
    root = write_fields(directory, fields, manifest)
    logger.info(f"Saved trajectory with {len(v)} frames to {root}")
    return root


def load_trajectory(directory: Union[str, Path]) -> SpaceTimeField:
    """Read a trajectory written by :func:`save_trajectory`."""
    fields, manifest = read_fields(directory)
    try:
        times: List[float] = [float(t) for t in manifest["times"].split(",") if t.strip()]
        kappa = float(manifest["kappa"])
        ell = float(manifest["ell"])
    except (KeyError, ValueError) as e:
        raise FieldFormatError(
            f"invalid trajectory manifest: {e}", path=str(directory)
        ) from e
    names = [f"frame_{i:04d}" for i in range(len(times))]
    missing = [name for name in names if name not in fields]
    if missing:
        raise FieldFormatError(f"trajectory lacks frames {missing}", path=str(directory))
    frames = [fields[name] for name in names]
    return SpaceTimeField(tuple(times), tuple(frames), kappa, ell)
