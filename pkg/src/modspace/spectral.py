"""Continuous Fourier transform ``f^(w) = int f(t) exp(-2 pi i t.w) dt`` on grids.

The transform is a Riemann sum evaluated with the radix-2 FFT. Both the
time and frequency grids are centered, which costs a ``(-1)^k`` sign
pattern on each side of the DFT (``N/2`` is even, so no global phase).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fft as _fft
from .errors import ParameterError
from .grid import Grid, SampledSignal, l2_norm

__all__ = ["Spectrum", "ft_values", "forward_ft", "inverse_ft", "parseval_check", "spectrum_l2_norm"]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Samples of a Fourier transform on the grid reciprocal to ``time_grid``."""

    grid: Grid
    values: np.ndarray
    time_grid: Grid

    def __post_init__(self):
        g, t = self.grid, self.time_grid
        if g.n != t.n or g.dim != t.dim or abs(g.spacing * t.spacing * g.n - 1) > 1e-12:
            raise ParameterError("frequency grid is not reciprocal to the time grid")
        values = np.array(self.values, dtype=complex).ravel()
        if values.shape[0] != g.size:
            raise ParameterError(f"expected {g.size} spectral values, got {values.shape[0]}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def as_signal(self) -> SampledSignal:
        """View the spectrum as a sampled function of frequency."""
        return SampledSignal(self.grid, self.values)


def _sign_pattern(grid: Grid) -> np.ndarray:
    s = np.where(np.arange(grid.n) % 2 == 0, 1.0, -1.0)
    out = s
    for _ in range(grid.dim - 1):
        out = np.multiply.outer(out, s)
    return out


def _origin_phase(time_grid: Grid, freq_grid: Grid, sign: int) -> np.ndarray | float:
    origin = np.asarray(time_grid.origin)
    if not np.any(origin):
        return 1.0
    return np.exp(sign * 2j * np.pi * (freq_grid.points @ origin)).reshape(freq_grid.shape)


def ft_values(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Transform samples with shape ``batch + grid.shape``; returns the same shape."""
    freq = grid.reciprocal()
    pattern = _sign_pattern(grid)
    axes = tuple(range(values.ndim - grid.dim, values.ndim))
    vals = _fft.fftn(values * pattern, axes)
    vals *= pattern * grid.cell_volume
    phase = _origin_phase(grid, freq, -1)
    if not np.isscalar(phase):
        vals *= phase
    return vals


def forward_ft(s: SampledSignal) -> Spectrum:
    grid = s.grid
    return Spectrum(grid.reciprocal(), ft_values(s.reshaped(), grid), grid)


def inverse_ft(sp: Spectrum) -> SampledSignal:
    grid, freq = sp.time_grid, sp.grid
    pattern = _sign_pattern(freq)
    axes = tuple(range(grid.dim))
    raw = sp.values.reshape(freq.shape) * _origin_phase(grid, freq, +1) * pattern
    vals = _fft.ifftn(raw, axes) * pattern * (freq.n * freq.spacing) ** grid.dim
    return SampledSignal(grid, vals)


def spectrum_l2_norm(sp: Spectrum) -> float:
    return float(np.sqrt(np.sum(np.abs(sp.values) ** 2) * sp.grid.cell_volume))


def parseval_check(s: SampledSignal) -> tuple[float, float]:
    """``(||f||_2, ||f^||_2)``; equal up to rounding for any signal."""
    return l2_norm(s), spectrum_l2_norm(forward_ft(s))
