"""Zero-padded spectral convolution and the heat semigroup.

Both operators embed the n×n field in a 2n×2n zero-padded array, so the
circular products computed with :mod:`scipy.fft` equal the linear ones for
kernels supported inside the box.
"""

import logging
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import fft as sp_fft

from ..exceptions import GridError
from ..lattice import Field, Grid, centred_gradient

logger = logging.getLogger(__name__)


def _padded_shape(grid: Grid) -> Tuple[int, int]:
    return (2 * grid.n, 2 * grid.n)


def _check_grids(a: Field, b: Field) -> Grid:
    if a.grid != b.grid:
        raise GridError(f"cannot convolve fields on {a.grid} and {b.grid}")
    return a.grid


class SpectralConvolver:
    """Convolution with a fixed kernel whose padded spectrum is computed once.

    ``SpectralConvolver(K)(f)`` equals ``convolve(K, f)``; use it when one
    kernel is applied to many fields (seed sweeps, gradient pairs).
    """

    def __init__(self, kernel: Field):
        self.kernel = kernel
        self.grid = kernel.grid
        self._spectrum = sp_fft.rfft2(kernel.values, s=_padded_shape(self.grid))

    def __call__(self, f: Field) -> Field:
        grid = _check_grids(self.kernel, f)
        spectrum = sp_fft.rfft2(f.values, s=_padded_shape(grid))
        return _crop(grid, self._spectrum * spectrum)

    def apply_many(self, stack: np.ndarray) -> np.ndarray:
        """Convolve a (B, n, n) stack of values with the kernel."""
        shape = _padded_shape(self.grid)
        spectra = sp_fft.rfft2(stack, s=shape, axes=(-2, -1))
        full = sp_fft.irfft2(spectra * self._spectrum, s=shape, axes=(-2, -1))
        lo = self.grid.origin_index
        return full[..., lo : lo + self.grid.n, lo : lo + self.grid.n] * self.grid.cell_area


def _crop(grid: Grid, product: np.ndarray) -> Field:
    # Output node i collects input offsets summing to i + n/2 in padded indices.
    full = sp_fft.irfft2(product, s=_padded_shape(grid))
    lo = grid.origin_index
    return Field(grid, full[lo : lo + grid.n, lo : lo + grid.n] * grid.cell_area)


def convolve(a: Field, b: Field) -> Field:
    """Discrete convolution (a*b)(x) = Σ_y a(x−y)b(y)h² with zero padding.

    Args:
        a: First factor.
        b: Second factor, on the same grid.

    Returns:
        The convolution restricted to the box.

    Raises:
        GridError: If the grids differ.
    """
    grid = _check_grids(a, b)
    shape = _padded_shape(grid)
    spectrum = sp_fft.rfft2(a.values, s=shape) * sp_fft.rfft2(b.values, s=shape)
    return _crop(grid, spectrum)


def direct_convolve(a: Field, b: Field) -> Field:
    """Brute-force O(n⁴) convolution; the reference for small grids."""
    grid = _check_grids(a, b)
    n, c = grid.n, grid.origin_index
    out = np.zeros(grid.shape)
    # Node i of a sits at offset i − c, so a(x_i − x_j) lives at index i − j + c.
    for i in range(n):
        for j in range(n):
            ki = i - np.arange(n) + c
            kj = j - np.arange(n) + c
            vi = (ki >= 0) & (ki < n)
            vj = (kj >= 0) & (kj < n)
            block = a.values[np.ix_(ki[vi], kj[vj])]
            out[i, j] = np.sum(block * b.values[np.ix_(vi, vj)])
    return Field(grid, out * grid.cell_area)


@lru_cache(maxsize=64)
def _heat_multiplier(grid: Grid, t: float) -> np.ndarray:
    size = 2 * grid.n
    k_rows = 2.0 * np.pi * sp_fft.fftfreq(size, d=grid.spacing)
    k_cols = 2.0 * np.pi * sp_fft.rfftfreq(size, d=grid.spacing)
    k2 = k_rows[:, None] ** 2 + k_cols[None, :] ** 2
    multiplier = np.exp(-k2 * t)
    multiplier.setflags(write=False)
    return multiplier


def heat_semigroup(f: Field, t: float) -> Field:
    """Apply e^{tΔ} by exact Fourier multiplication on the padded grid.

    Args:
        f: Initial datum.
        t: Time, non-negative.

    Returns:
        The heat flow of f at time t; f itself when t = 0.

    Raises:
        ValueError: If t is negative.
    """
    if t < 0:
        raise ValueError(f"heat semigroup needs t ≥ 0, got {t}")
    if t == 0:
        return f
    return Field(f.grid, heat_semigroup_values(f.values, f.grid, t))


def heat_semigroup_values(values: np.ndarray, grid: Grid, t: float) -> np.ndarray:
    """e^{tΔ} on raw values of shape (..., n, n); the stacked form used by solvers."""
    shape = _padded_shape(grid)
    spectrum = sp_fft.rfft2(values, s=shape, axes=(-2, -1))
    spectrum *= _heat_multiplier(grid, float(t))
    full = sp_fft.irfft2(spectrum, s=shape, axes=(-2, -1))
    return full[..., : grid.n, : grid.n]


class PaddedHeatFlow:
    """Repeated e^{dtΔ} steps kept in Fourier space on the padded grid.

    Nothing is cropped between steps, so k steps equal one application of
    e^{k·dt·Δ} and ``crop(step(forward(f)))`` equals ``heat_semigroup(f, dt)``.
    """

    def __init__(self, grid: Grid, dt: float):
        if dt <= 0:
            raise ValueError(f"heat flow step must be positive, got {dt}")
        self.grid = grid
        self.dt = float(dt)
        self._shape = _padded_shape(grid)
        self._multiplier = _heat_multiplier(grid, self.dt)

    def forward(self, values: np.ndarray) -> np.ndarray:
        return sp_fft.rfft2(values, s=self._shape)

    def step(self, spectrum: np.ndarray) -> np.ndarray:
        return spectrum * self._multiplier

    def crop(self, spectrum: np.ndarray) -> np.ndarray:
        full = sp_fft.irfft2(spectrum, s=self._shape)
        return full[: self.grid.n, : self.grid.n]


def laplacian_5pt(f: Field) -> Field:
    """Five-point Laplacian; the outermost ring of nodes is set to 0."""
    v = f.values
    out = np.zeros(f.grid.shape)
    out[1:-1, 1:-1] = (
        v[2:, 1:-1] + v[:-2, 1:-1] + v[1:-1, 2:] + v[1:-1, :-2] - 4.0 * v[1:-1, 1:-1]
    ) / f.grid.cell_area
    return Field(f.grid, out)


__all__ = [
    "PaddedHeatFlow",
    "SpectralConvolver",
    "centred_gradient",
    "convolve",
    "direct_convolve",
    "heat_semigroup",
    "heat_semigroup_values",
    "laplacian_5pt",
]
