"""Short-time Fourier transform on a rectangular time-frequency lattice.

``V_g f(x, y) = int f(t) conj(g(t - x)) exp(-2 pi i y.t) dt``

Each row of a :class:`TFMatrix` is the Riemann-sum Fourier transform of the
windowed slice ``f * conj(g(. - x_j))``; the window is evaluated exactly at
the shifted points, never resampled.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import DomainCoverageError, ParameterError
from .expr import FunctionExpr, bump, gaussian, plateau, plane_wave
from .grid import Grid, SampledSignal, default_grid, sample
from .spectral import forward_ft, ft_values

__all__ = [
    "WindowSpec",
    "TFMatrix",
    "default_lattice",
    "stft",
    "stft_at",
    "stft_magnitude_identity_check",
    "worker_count",
]

DEFAULT_STRIDE = 8
ROW_CHUNK = 32
# exp(-40) ~ 4e-18: beyond this many widths a Gaussian is below rounding.
_GAUSS_CUTOFF = float(np.sqrt(40 / np.pi))


@dataclass(frozen=True, eq=False)
class WindowSpec:
    """Analysis window ``g``.

    ``kind`` is ``"gaussian"``, ``"plateau"``, or ``"custom"``. ``radius`` is
    the radius beyond which the window is (numerically) zero; the STFT uses
    it to check that every shifted window fits inside the sampling grid.
    """

    kind: str
    expr: FunctionExpr
    radius: float
    label: str = ""
    _l1_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("gaussian", "plateau", "custom"):
            raise ParameterError(f"unknown window kind {self.kind!r}")
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise ParameterError(f"window radius must be positive, got {self.radius}")
        if not self.label:
            object.__setattr__(self, "label", repr(self.expr))

    @classmethod
    def gaussian(cls, width: float = 1.0, normalized: bool = False, dim: int = 1) -> WindowSpec:
        """``exp(-pi |t/width|^2)``, optionally scaled to unit L^2 norm."""
        expr = gaussian(width)
        if normalized:
            expr = (2 ** (dim / 4) / width ** (dim / 2)) * expr
        label = f"gaussian({width:g}{', normalized' if normalized else ''})"
        return cls("gaussian", expr, _GAUSS_CUTOFF * width, label)

    @classmethod
    def plateau(cls, radius: float = 1.0) -> WindowSpec:
        """Equal to 1 on ``B_{2R}(0)``, zero outside ``B_{2R+1}(0)``."""
        return cls("plateau", plateau(radius), 2 * radius + 1, f"plateau({radius:g})")

    @classmethod
    def custom(cls, expr: FunctionExpr, radius: Optional[float] = None) -> WindowSpec:
        radius = expr.support_radius if radius is None else radius
        if radius is None:
            raise ParameterError("custom window needs compact support or an explicit radius")
        return cls("custom", expr, float(radius))

    @classmethod
    def bump(cls, radius: float = 1.0) -> WindowSpec:
        return cls("custom", bump(radius), float(radius), f"bump({radius:g})")

    @classmethod
    def default(cls, dim: int = 1) -> WindowSpec:
        return cls.gaussian(1.0, normalized=True, dim=dim)

    def fourier_l1(self, grid: Grid) -> float:
        """``||g^||_{L^1}`` on the frequency grid paired with ``grid``; cached per grid."""
        if grid not in self._l1_cache:
            sp = forward_ft(sample(self.expr, grid))
            self._l1_cache[grid] = float(np.sum(np.abs(sp.values)) * sp.grid.cell_volume)
        return self._l1_cache[grid]


@dataclass(frozen=True, eq=False)
class TFMatrix:
    """STFT samples indexed ``(time index, frequency index)``.

    ``time_spacing`` and ``freq_spacing`` are the quadrature cell volumes of
    the two lattices; the matrix takes ownership of ``values``. The grids
    are attached when the matrix comes from :func:`stft`; hand-built matrices
    may omit them.
    """

    values: np.ndarray
    time_spacing: float
    freq_spacing: float
    time_grid: Optional[Grid] = None
    freq_grid: Optional[Grid] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 2:
            raise ParameterError("TF matrix must be two-dimensional")
        if self.time_grid is not None and values.shape[0] != self.time_grid.size:
            raise ParameterError(f"{values.shape[0]} rows do not match the time lattice")
        if self.freq_grid is not None and values.shape[1] != self.freq_grid.size:
            raise ParameterError(f"{values.shape[1]} columns do not match the frequency grid")
        if not np.all(np.isfinite(values)):
            raise ParameterError("TF matrix has non-finite entries")
        if self.time_spacing <= 0 or self.freq_spacing <= 0:
            raise ParameterError("lattice spacings must be positive")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def on_grids(cls, values, time_grid: Grid, freq_grid: Grid) -> TFMatrix:
        return cls(values, time_grid.cell_volume, freq_grid.cell_volume, time_grid, freq_grid)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.time_spacing * self.freq_spacing))


def default_lattice(grid: Grid, stride: int = DEFAULT_STRIDE) -> Grid:
    """Time lattice with spacing ``stride * grid.spacing`` over half the grid extent."""
    if stride < 1 or grid.n % (2 * stride):
        raise ParameterError(f"stride {stride} incompatible with {grid.n} points")
    return Grid(grid.dim, grid.n // (2 * stride), grid.spacing * stride)


def worker_count() -> int:
    env = os.environ.get("MODSPACE_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ParameterError(f"MODSPACE_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise ParameterError("MODSPACE_THREADS must be >= 1")
        return n
    return min(4, os.cpu_count() or 1)


def _check_coverage(grid: Grid, lattice_pts: np.ndarray, radius: float) -> None:
    lo, hi = lattice_pts.min(axis=0), lattice_pts.max(axis=0)
    for corner in (lo, hi):
        if not grid.contains_box(corner, radius):
            raise DomainCoverageError(
                f"window of radius {radius:g} shifted to {tuple(map(float, corner))} leaves the grid "
                f"(extent {grid.extent:g})"
            )


def _signal_values(f: Union[FunctionExpr, SampledSignal], grid: Grid) -> np.ndarray:
    if isinstance(f, SampledSignal):
        if f.grid != grid:
            raise ParameterError("signal grid differs from the STFT grid")
        return f.values
    return sample(f, grid).values


def _shift_table(window: WindowSpec, grid: Grid, xs: np.ndarray):
    """Row lookup for shifts that are whole multiples of the grid spacing.

    The window is sampled once on ``h * a`` for ``|a_i| <= n``; row ``j`` is then a
    strided view. Returns ``None`` when some shift is off the grid.
    """
    n, h, d = grid.n, grid.spacing, grid.dim
    steps = (xs - np.asarray(grid.origin)) / h
    idx = np.rint(steps)
    if not np.allclose(steps, idx, rtol=0, atol=1e-9) or np.any(np.abs(idx) > n // 2):
        return None
    idx = idx.astype(int)
    ax = h * np.arange(-n, n + 1)
    mesh = np.stack(np.meshgrid(*([ax] * d), indexing="ij"), axis=-1).reshape(-1, d)
    ext = window.expr(mesh).reshape((2 * n + 1,) * d)
    views = np.lib.stride_tricks.sliding_window_view(ext, (n,) * d)
    first = n // 2 - idx  # t_k - x_j = h * (k - n/2 - m_j)

    def lookup(start: int, count: int) -> np.ndarray:
        sel = first[start : start + count]
        return views[tuple(sel.T)].reshape(count, -1)

    return lookup


def stft(
    f: Union[FunctionExpr, SampledSignal],
    window: Optional[WindowSpec] = None,
    grid: Optional[Grid] = None,
    lattice: Optional[Grid] = None,
    stride: int = DEFAULT_STRIDE,
    threads: Optional[int] = None,
) -> TFMatrix:
    """STFT of ``f`` on ``lattice x grid.reciprocal()``.

    ``grid`` is the quadrature grid in ``t`` (defaults to the signal's own grid
    or :func:`default_grid`); ``lattice`` holds the time shifts ``x_j``.
    """
    if grid is None:
        grid = f.grid if isinstance(f, SampledSignal) else default_grid()
    window = WindowSpec.default(grid.dim) if window is None else window
    lattice = default_lattice(grid, stride) if lattice is None else lattice
    if lattice.dim != grid.dim:
        raise ParameterError("lattice and grid dimensions differ")
    xs = lattice.points
    _check_coverage(grid, xs, window.radius)

    fvals = _signal_values(f, grid)
    tpts = grid.points
    shape = grid.shape

    out = np.zeros((xs.shape[0], grid.size), dtype=complex)
    table = _shift_table(window, grid, xs)

    def rows(start):
        chunk = xs[start : start + ROW_CHUNK]
        if table is None:
            gvals = window.expr(tpts[None, :, :] - chunk[:, None, :])
        else:
            gvals = table(start, chunk.shape[0])
        sliced = (np.conj(gvals) if np.iscomplexobj(gvals) else gvals) * fvals
        # identically zero slices transform to exact zeros, already in ``out``
        live = np.flatnonzero(np.any(sliced != 0, axis=1))
        if live.size == sliced.shape[0]:
            out[start : start + ROW_CHUNK] = ft_values(sliced.reshape((-1,) + shape), grid).reshape(live.size, -1)
        elif live.size:
            batch = sliced[live].reshape((live.size,) + shape)
            out[start + live] = ft_values(batch, grid).reshape(live.size, -1)

    starts = range(0, xs.shape[0], ROW_CHUNK)
    n_workers = worker_count() if threads is None else threads
    if n_workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(rows, starts))
    else:
        for start in starts:
            rows(start)
    return TFMatrix.on_grids(out, lattice, grid.reciprocal())


def stft_at(
    f: Union[FunctionExpr, SampledSignal],
    window: Union[WindowSpec, FunctionExpr],
    x,
    omega,
    grid: Optional[Grid] = None,
) -> np.ndarray:
    """STFT at arbitrary points by direct quadrature on ``grid``.

    ``x`` and ``omega`` broadcast against each other; for ``d > 1`` their last
    axis holds coordinates.
    """
    if grid is None:
        grid = f.grid if isinstance(f, SampledSignal) else default_grid()
    g = window.expr if isinstance(window, WindowSpec) else window
    d = grid.dim
    x = np.asarray(x, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if d == 1:
        x, omega = x[..., None], omega[..., None]
    x, omega = np.broadcast_arrays(x, omega)
    out_shape = x.shape[:-1]
    xs, ws = x.reshape(-1, d), omega.reshape(-1, d)
    fvals = _signal_values(f, grid)
    tpts = grid.points
    out = np.empty(xs.shape[0], dtype=complex)
    for i in range(xs.shape[0]):
        gv = np.conj(g(tpts - xs[i]))
        phase = np.exp(-2j * np.pi * (tpts @ ws[i]))
        out[i] = np.sum(fvals * gv * phase) * grid.cell_volume
    return out.reshape(out_shape)


def stft_magnitude_identity_check(
    f: FunctionExpr,
    window: WindowSpec,
    pt: tuple[float, float],
    grid: Optional[Grid] = None,
) -> tuple[float, float]:
    """``(|V_g f(x, w)|, |V_{g^} f^(w, -x)|)`` computed on independent routes.

    The left side is direct time-domain quadrature. The right side works
    entirely with spectra: ``g^(xi - w)`` is the transform of ``g * e^{2 pi i w t}``.
    """
    grid = default_grid() if grid is None else grid
    x, w = (np.atleast_1d(np.asarray(c, dtype=float)) for c in pt)
    lhs = abs(complex(np.ravel(stft_at(f, window, x, w, grid))[0]))

    f_hat = forward_ft(sample(f, grid))
    g_shift = forward_ft(sample(window.expr * plane_wave(w), grid))
    xi = f_hat.grid.points
    phase = np.exp(2j * np.pi * (xi @ x))
    rhs_val = np.sum(f_hat.values * np.conj(g_shift.values) * phase) * f_hat.grid.cell_volume
    return lhs, abs(complex(rhs_val))
