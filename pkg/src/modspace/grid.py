"""Uniform centered grids and sampled signals on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from .errors import EvaluationError, ParameterError

if TYPE_CHECKING:
    from .expr import FunctionExpr

__all__ = ["Grid", "SampledSignal", "default_grid", "sample", "l2_norm"]


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Centered uniform grid on R^d, d in {1, 2}.

    Points along each axis are ``origin + spacing * (k - n/2)`` for
    ``k = 0..n-1``. Multi-dimensional points are enumerated in C order.
    """

    dim: int
    n: int
    spacing: float
    origin: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ParameterError(f"grid dimension must be 1 or 2, got {self.dim}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 4 or not _is_pow2(int(self.n)):
            raise ParameterError(f"points per axis must be a power of two >= 4, got {self.n}")
        if not np.isfinite(self.spacing) or self.spacing <= 0:
            raise ParameterError(f"spacing must be positive, got {self.spacing}")
        origin = tuple(float(o) for o in np.broadcast_to(self.origin or 0.0, (self.dim,)))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "spacing", float(self.spacing))
        object.__setattr__(self, "origin", origin)

    @property
    def extent(self) -> float:
        return self.n * self.spacing

    @property
    def size(self) -> int:
        return self.n**self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    def axis(self, i: int = 0) -> np.ndarray:
        k = np.arange(self.n) - self.n // 2
        return self.origin[i] + self.spacing * k

    @cached_property
    def points(self) -> np.ndarray:
        """All grid points as an array of shape ``(size, dim)``."""
        axes = [self.axis(i) for i in range(self.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        pts.setflags(write=False)
        return pts

    def reciprocal(self) -> Grid:
        """Frequency grid paired with this grid by the discrete transform."""
        return Grid(self.dim, self.n, 1.0 / (self.n * self.spacing))

    def refined(self, factor: int = 2) -> Grid:
        """Same extent, ``factor`` times finer spacing."""
        return Grid(self.dim, self.n * factor, self.spacing / factor, self.origin)

    def contains_box(self, center, radius: float) -> bool:
        """True if the max-norm ball of ``radius`` about ``center`` lies in the grid."""
        center = np.broadcast_to(np.asarray(center, dtype=float), (self.dim,))
        for i in range(self.dim):
            ax = self.axis(i)
            if center[i] - radius < ax[0] or center[i] + radius > ax[-1]:
                return False
        return True


def default_grid(dim: int = 1) -> Grid:
    """d=1: 4096 points covering [-16, 16). d=2: 256 x 256 on [-8, 8)^2."""
    if dim == 1:
        return Grid(1, 4096, 32.0 / 4096)
    return Grid(2, 256, 16.0 / 256)


@dataclass(frozen=True, eq=False)
class SampledSignal:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).ravel()
        if values.shape[0] != self.grid.size:
            raise ParameterError(
                f"expected {self.grid.size} samples for {self.grid}, got {values.shape[0]}"
            )
        if not np.all(np.isfinite(values)):
            raise EvaluationError("sampled signal contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def reshaped(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    def __add__(self, other: SampledSignal) -> SampledSignal:
        _check_same_grid(self, other)
        return SampledSignal(self.grid, self.values + other.values)

    def __sub__(self, other: SampledSignal) -> SampledSignal:
        _check_same_grid(self, other)
        return SampledSignal(self.grid, self.values - other.values)

    def __mul__(self, c) -> SampledSignal:
        return SampledSignal(self.grid, self.values * c)

    __rmul__ = __mul__


def _check_same_grid(a, b):
    if a.grid != b.grid:
        raise ParameterError("signals live on different grids")


def sample(f: FunctionExpr, grid: Grid) -> SampledSignal:
    """Evaluate ``f`` exactly at every grid point."""
    values = np.asarray(f(grid.points), dtype=complex)
    bad = ~np.isfinite(values)
    if bad.any():
        pt = grid.points[int(np.argmax(bad))]
        raise EvaluationError(f"non-finite value of {f!r} at t={tuple(map(float, pt))}")
    return SampledSignal(grid, values)


def l2_norm(s: SampledSignal) -> float:
    """Riemann-sum L^2 norm."""
    return float(np.sqrt(np.sum(np.abs(s.values) ** 2) * s.grid.cell_volume))
