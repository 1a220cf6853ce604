"""Fourier multipliers ``H_sigma f = F^{-1}(sigma * f^)``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import EvaluationError, ParameterError, PreconditionError
from .expr import FunctionExpr
from .grid import Grid, SampledSignal, default_grid, sample
from .maps import AffineMap, Box, NonlinearMap
from .norms import NormParams, modulation_norm
from .spectral import Spectrum, forward_ft, inverse_ft
from .stft import WindowSpec

__all__ = [
    "MultiplierSymbol",
    "apply_multiplier",
    "multiplier_ratios",
    "multiplier_norm_ratio",
    "idempotence_residual",
]


@dataclass(frozen=True, eq=False)
class MultiplierSymbol:
    """Evaluable symbol ``sigma(xi)``; ``kind`` is cube_indicator, chirp, constant or custom."""

    kind: str
    func: Callable[[np.ndarray], np.ndarray]
    label: str

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        pts = xi.reshape(-1, 1) if xi.ndim <= 1 else xi
        vals = np.broadcast_to(np.asarray(self.func(pts), dtype=complex), (pts.shape[0],))
        if not np.all(np.isfinite(vals)):
            bad = pts[int(np.argmax(~np.isfinite(vals)))]
            raise EvaluationError(f"symbol {self.label} is not finite at xi={tuple(map(float, bad))}")
        return vals

    @classmethod
    def cube_indicator(cls, lower, upper) -> MultiplierSymbol:
        box = Box(lower, upper)
        return cls("cube_indicator", lambda p: box.contains(p).astype(float), f"chi{box!r}")

    @classmethod
    def chirp(cls, phase: Union[AffineMap, NonlinearMap, Callable], label: str = "") -> MultiplierSymbol:
        """``exp(i phase(xi))`` for a real phase; maps must act on R^1."""
        if isinstance(phase, (AffineMap, NonlinearMap)):
            if phase.dim != 1:
                raise ParameterError("map-valued chirp phases must act on R^1")
            fn = lambda p: phase.apply(p)[:, 0]
            label = label or f"exp(i {phase!r})"
        else:
            fn = lambda p: np.asarray(phase(p), dtype=float).reshape(p.shape[0])
            label = label or "exp(i phase)"
        return cls("chirp", lambda p: np.exp(1j * fn(p)), label)

    @classmethod
    def sigma0(cls) -> MultiplierSymbol:
        """``exp(i xi)``."""
        return cls.chirp(AffineMap.identity(1), "exp(i xi)")

    @classmethod
    def constant(cls, c: complex = 1.0) -> MultiplierSymbol:
        c = complex(c)
        return cls("constant", lambda p: np.full(p.shape[0], c), f"{c:g}")

    @classmethod
    def custom(cls, func: Callable, label: str = "custom") -> MultiplierSymbol:
        return cls("custom", func, label)


def _spectrum_of(f: Union[FunctionExpr, SampledSignal], grid: Optional[Grid]) -> Spectrum:
    if isinstance(f, SampledSignal):
        if grid is not None and grid != f.grid:
            raise ParameterError("signal grid differs from the requested grid")
        return forward_ft(f)
    return forward_ft(sample(f, default_grid() if grid is None else grid))


def apply_multiplier(
    sigma: MultiplierSymbol,
    f: Union[FunctionExpr, SampledSignal],
    grid: Optional[Grid] = None,
) -> SampledSignal:
    sp = _spectrum_of(f, grid)
    weighted = Spectrum(sp.grid, sigma(sp.grid.points) * sp.values, sp.time_grid)
    return inverse_ft(weighted)


def idempotence_residual(
    sigma: MultiplierSymbol, f: Union[FunctionExpr, SampledSignal], grid: Optional[Grid] = None
) -> float:
    """``max |H(H f) - H f|``; zero for projections."""
    once = apply_multiplier(sigma, f, grid)
    twice = apply_multiplier(sigma, once)
    return float(np.max(np.abs(twice.values - once.values)))


def multiplier_ratios(
    sigma: MultiplierSymbol,
    family: Sequence[FunctionExpr],
    params: NormParams,
    window: Optional[WindowSpec] = None,
    grid: Optional[Grid] = None,
) -> list[float]:
    if not family:
        raise PreconditionError("test family is empty")
    grid = default_grid() if grid is None else grid
    out = []
    for f in family:
        den = modulation_norm(f, window, params, grid)
        if den == 0:
            raise PreconditionError(f"{f!r} has zero modulation norm")
        out.append(modulation_norm(apply_multiplier(sigma, f, grid), window, params, grid) / den)
    return out


def multiplier_norm_ratio(
    sigma: MultiplierSymbol,
    family: Sequence[FunctionExpr],
    params: NormParams,
    window: Optional[WindowSpec] = None,
    grid: Optional[Grid] = None,
) -> float:
    """Largest ``||H f|| / ||f||`` over the family: a lower bound for the operator norm."""
    return max(multiplier_ratios(sigma, family, params, window, grid))
