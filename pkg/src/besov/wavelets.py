"""Orthonormal Daubechies wavelets and the periodic 2D pyramid transform.

The filters come from spectral factorisation of

    |m0(ω)|² = cos^{2N}(ω/2)·P(sin²(ω/2)),   P(y) = Σ_{k<N} C(N−1+k, k) y^k,

keeping the roots inside the unit circle. With N = 6 vanishing moments the
scaling function is Hölder continuous of order ≈ 2.19, enough for r = 2.

A field f on a grid with h = 2^{−J} is entered as s^J = f·h ≈ ⟨f, φ^J_x⟩ and
analysed down to level 0. Level n holds three detail grids ⟨f, ψ^n_x⟩ for
x ∈ 2^{−n}Z² ∩ box (L²-normalised, ψ^n_x = 2^n ψ(2^n(·−x)) in d = 2); level 0
also keeps the scaling coefficients. The transform is periodic; coefficients
whose support leaves the collar-reduced box are flagged as unusable.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
from scipy import special

from ..exceptions import GridError, WaveletError
from ..lattice import Field, Grid, WeightSpec, write_fields
from ..utils import timer

logger = logging.getLogger(__name__)

DEFAULT_VANISHING_MOMENTS = 6
DEFAULT_ORDER = 2
ORIENTATIONS = ("horizontal", "vertical", "diagonal")
FINEST_LEVEL_MARGIN = 2

DetailTriple = Tuple[np.ndarray, np.ndarray, np.ndarray]


@lru_cache(maxsize=8)
def daubechies_filter(vanishing_moments: int) -> np.ndarray:
    """Minimum-phase Daubechies low-pass filter with Σh = √2."""
    N = int(vanishing_moments)
    if N < 1:
        raise WaveletError(f"vanishing moments must be ≥ 1, got {N}")
    # P(y) in descending powers for np.roots.
    poly = [special.comb(N - 1 + k, k, exact=True) for k in range(N)][::-1]
    zeros: List[complex] = []
    for y in np.roots(poly) if N > 1 else []:
        # sin²(ω/2) = −(z−1)²/(4z)  ⇔  z² + (4y−2)z + 1 = 0; roots come as (z, 1/z).
        pair = np.roots([1.0, 4.0 * y - 2.0, 1.0])
        zeros.append(pair[np.argmin(np.abs(pair))])
    coeffs = np.poly(np.concatenate([-np.ones(N), np.asarray(zeros, dtype=complex)]))
    taps = np.real(coeffs)
    taps = taps * math.sqrt(2.0) / taps.sum()
    taps.setflags(write=False)
    return taps


def quadrature_mirror(lowpass: np.ndarray) -> np.ndarray:
    """High-pass filter g[m] = (−1)^m h[L−1−m]."""
    signs = (-1.0) ** np.arange(lowpass.size)
    return signs * lowpass[::-1]


@dataclass(frozen=True, eq=False)
class WaveletBasis:
    """Compactly supported orthonormal wavelet family of order r."""

    order: int = DEFAULT_ORDER
    vanishing_moments: int = DEFAULT_VANISHING_MOMENTS
    lowpass: np.ndarray = field(init=False, repr=False)
    highpass: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.order < 2:
            raise WaveletError(f"wavelet order must be ≥ 2, got {self.order}")
        if self.vanishing_moments < 3 * self.order:
            raise WaveletError(
                f"order r={self.order} needs at least {3 * self.order} vanishing "
                f"moments, got {self.vanishing_moments}"
            )
        lowpass = daubechies_filter(self.vanishing_moments)
        object.__setattr__(self, "lowpass", lowpass)
        object.__setattr__(self, "highpass", quadrature_mirror(lowpass))

    @property
    def length(self) -> int:
        return int(self.lowpass.size)

    @property
    def support_width(self) -> int:
        """Support of φ and ψ in units of the level spacing."""
        return self.length - 1

    @property
    def name(self) -> str:
        return f"daubechies-{self.vanishing_moments} (r={self.order})"

    def orthonormality_defect(self) -> float:
        """Largest deviation of the filter bank from discrete orthonormality."""
        h, g = self.lowpass, self.highpass
        worst = 0.0
        for shift in range(0, self.length, 2):
            target = 1.0 if shift == 0 else 0.0
            hh = float(np.dot(h[shift:], h[: self.length - shift]))
            gg = float(np.dot(g[shift:], g[: self.length - shift]))
            hg = float(np.dot(h[shift:], g[: self.length - shift]))
            gh = float(np.dot(g[shift:], h[: self.length - shift]))
            worst = max(worst, abs(hh - target), abs(gg - target), abs(hg), abs(gh))
        return worst


def _tap_indices(size: int, taps: int) -> np.ndarray:
    """(2k + m) mod size for k < size/2 and m < taps."""
    return (2 * np.arange(size // 2)[:, None] + np.arange(taps)[None, :]) % size


def _analysis_step(
    values: np.ndarray, basis: WaveletBasis, axis: int
) -> Tuple[np.ndarray, np.ndarray]:
    moved = np.moveaxis(values, axis, -1)
    gathered = moved[..., _tap_indices(moved.shape[-1], basis.length)]
    low = gathered @ basis.lowpass
    high = gathered @ basis.highpass
    return np.moveaxis(low, -1, axis), np.moveaxis(high, -1, axis)


def _synthesis_step(
    low: np.ndarray, high: np.ndarray, basis: WaveletBasis, axis: int
) -> np.ndarray:
    low = np.moveaxis(low, axis, -1)
    high = np.moveaxis(high, axis, -1)
    size = 2 * low.shape[-1]
    out = np.zeros(low.shape[:-1] + (size,))
    indices = _tap_indices(size, basis.length)
    for m in range(basis.length):
        # For fixed m the targets 2k+m are distinct modulo an even size.
        out[..., indices[:, m]] += basis.lowpass[m] * low + basis.highpass[m] * high
    return np.moveaxis(out, -1, axis)


def analysis_level(
    values: np.ndarray, basis: WaveletBasis
) -> Tuple[np.ndarray, DetailTriple]:
    """One 2D analysis step: approximation and (horizontal, vertical, diagonal) details."""
    low, high = _analysis_step(values, basis, axis=0)
    ll, lh = _analysis_step(low, basis, axis=1)
    hl, hh = _analysis_step(high, basis, axis=1)
    return ll, (lh, hl, hh)


def synthesis_level(
    approximation: np.ndarray, details: DetailTriple, basis: WaveletBasis
) -> np.ndarray:
    """Inverse of :func:`analysis_level`."""
    lh, hl, hh = details
    low = _synthesis_step(approximation, lh, basis, axis=1)
    high = _synthesis_step(hl, hh, basis, axis=1)
    return _synthesis_step(low, high, basis, axis=0)


def dyadic_depth(grid: Grid) -> int:
    """J with h = 2^{−J}, checking that the grid carries a full pyramid.

    Raises:
        WaveletError: If h is not dyadic, L is not an integer or J < 2.
    """
    try:
        J = grid.dyadic_level
    except GridError as e:
        raise WaveletError(f"wavelet analysis needs a dyadic spacing: {e}") from e
    if abs(grid.L - round(grid.L)) > 1e-12:
        raise WaveletError(f"wavelet analysis needs an integer half-width, got L={grid.L}")
    if J < FINEST_LEVEL_MARGIN:
        raise WaveletError(f"grid too coarse for a pyramid: h = 2^-{J}")
    return J


@dataclass(frozen=True, eq=False)
class CoefficientPyramid:
    """Wavelet coefficients of one field, levels 0 … J−1.

    ``details[n]`` holds the three detail grids of level n, each of shape
    (2L·2^n, 2L·2^n); ``scaling`` holds the level-0 scaling coefficients.
    Norms use the levels n ≤ ``max_level`` = J−2, whose wavelets span at
    least four grid cells.
    """

    grid: Grid
    basis: WaveletBasis
    scaling: np.ndarray
    details: Tuple[DetailTriple, ...]
    collar: float = 0.0

    @property
    def depth(self) -> int:
        return len(self.details)

    @property
    def max_level(self) -> int:
        return self.depth - FINEST_LEVEL_MARGIN

    def positions(self, level: int) -> np.ndarray:
        """Support centres along one axis of the coefficients of a level."""
        size = int(round(2 * self.grid.L)) << level
        step = 2.0**-level
        return -self.grid.L + (np.arange(size) + self.basis.support_width / 2.0) * step

    def usable_axis(self, level: int) -> np.ndarray:
        """Coefficients whose support lies inside the collar-reduced interval."""
        size = int(round(2 * self.grid.L)) << level
        step = 2.0**-level
        start = -self.grid.L + np.arange(size) * step
        stop = start + self.basis.support_width * step
        lo, hi = -self.grid.L + self.collar, self.grid.L - self.collar
        return (start >= lo - 1e-12) & (stop <= hi + 1e-12)

    def usable_mask(self, level: int) -> np.ndarray:
        axis = self.usable_axis(level)
        return axis[:, None] & axis[None, :]

    def weight_at(self, level: int, w: WeightSpec) -> np.ndarray:
        """Weight evaluated at the support centres of a level."""
        centres = self.positions(level)
        radius = np.sqrt(centres[:, None] ** 2 + centres[None, :] ** 2)
        return w.of_radius(radius)

    def energy(self) -> float:
        """Σ coeff² over all levels and the scaling coefficients."""
        total = float(np.sum(self.scaling**2))
        for triple in self.details:
            total += sum(float(np.sum(d**2)) for d in triple)
        return total

    def replace_details(self, details: Tuple[DetailTriple, ...]) -> "CoefficientPyramid":
        return CoefficientPyramid(self.grid, self.basis, self.scaling, details, self.collar)

    @classmethod
    def zeros(
        cls, grid: Grid, basis: WaveletBasis, collar: float = 0.0
    ) -> "CoefficientPyramid":
        J = dyadic_depth(grid)
        base = int(round(2 * grid.L))
        shapes = [(base << n, base << n) for n in range(J)]
        details = tuple((np.zeros(s), np.zeros(s), np.zeros(s)) for s in shapes)
        return cls(grid, basis, np.zeros((base, base)), details, collar)

    @classmethod
    def atom(
        cls,
        grid: Grid,
        basis: WaveletBasis,
        level: int,
        orientation: int,
        index: Tuple[int, int],
        amplitude: float = 1.0,
        collar: float = 0.0,
    ) -> "CoefficientPyramid":
        """Pyramid with a single non-zero detail coefficient."""
        pyramid = cls.zeros(grid, basis, collar)
        if not 0 <= level < pyramid.depth:
            raise WaveletError(f"level {level} outside 0…{pyramid.depth - 1}")
        pyramid.details[level][orientation][index] = amplitude
        return pyramid

    def export(self, directory: Union[str, Path]) -> Path:
        """Write the detail levels as PAMF fields on their 2^{−n} lattices.

        Levels whose lattice is not a valid grid (fewer than 8 nodes per
        axis, or a half-width that is not a power of two) are skipped and
        listed in the manifest.
        """
        fields: Dict[str, Field] = {}
        skipped: List[int] = []
        for level, triple in enumerate(self.details):
            try:
                lattice = Grid(self.grid.L, triple[0].shape[0])
            except GridError:
                skipped.append(level)
                continue
            for name, values in zip(ORIENTATIONS, triple):
                fields[f"level{level}_{name}"] = Field(lattice, values)
        manifest = {
            "basis": self.basis.name,
            "L": self.grid.L,
            "n": self.grid.n,
            "collar": self.collar,
            "max_level": self.max_level,
            "skipped_levels": ", ".join(str(level) for level in skipped),
        }
        return write_fields(directory, fields, manifest)


@timer
def analyze(f: Field, basis: WaveletBasis, collar: float = 0.0) -> CoefficientPyramid:
    """Wavelet coefficients of a field.

    Args:
        f: Field on a grid with h = 2^{−J}, J ≥ 2, and integer L.
        basis: Wavelet family.
        collar: Width of the boundary band whose coefficients are unusable.

    Returns:
        The coefficient pyramid.

    Raises:
        WaveletError: If the grid does not support the transform.
    """
    J = dyadic_depth(f.grid)
    approximation = f.values * f.grid.spacing
    details: List[DetailTriple] = []
    for _ in range(J):
        approximation, triple = analysis_level(approximation, basis)
        details.append(triple)
    details.reverse()
    logger.debug(f"Analysed field n={f.grid.n} into {J} levels with {basis.name}")
    return CoefficientPyramid(f.grid, basis, approximation, tuple(details), collar)


def synthesize(p: CoefficientPyramid) -> Field:
    """Inverse transform of a pyramid back to node values."""
    approximation = p.scaling
    for triple in p.details:
        approximation = synthesis_level(approximation, triple, p.basis)
    return Field(p.grid, approximation / p.grid.spacing)
