"""The composition operator ``u -> u o phi`` and its effect on M^{p,q} norms."""
from __future__ import annotations

from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import DegenerateInputError, ParameterError, PreconditionError
from .expr import FunctionExpr, bump, chirp, compose, indicator
from .grid import Grid, default_grid
from .maps import AffineMap, NonlinearMap, PiecewiseAffineMap
from .norms import NormParams, modulation_norm
from .stft import DEFAULT_STRIDE, WindowSpec, stft_at

__all__ = [
    "compose",
    "covariance_sides",
    "covariance_check",
    "affine_invariance_ratio",
    "piece_decomposition",
    "piecewise_ratios",
    "piecewise_boundedness_sweep",
    "nonlinear_blowup_sweep",
    "chirp_blowup_sweep",
]

MapLike = Union[AffineMap, PiecewiseAffineMap, NonlinearMap]


def _split_points(pts, dim: int) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(pts, dtype=float)
    if dim == 1:
        arr = arr.reshape(-1, 2)
        return arr[:, :1], arr[:, 1:]
    arr = arr.reshape(-1, 2, dim)
    return arr[:, 0, :], arr[:, 1, :]


def covariance_sides(
    u: FunctionExpr,
    window: WindowSpec,
    phi: AffineMap,
    pts,
    grid: Optional[Grid] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the affine covariance identity at each ``(x, w)`` in ``pts``.

    Left: ``V_g(u o phi)(x, w)``. Right:
    ``|det A|^{-1} exp(2 pi i w.A^{-1}b) V_{g o A^{-1}} u(Ax + b, A^{-T} w)``.
    For ``d = 1`` each point is a pair ``(x, w)``; for ``d = 2`` it is a pair of
    2-vectors.
    """
    grid = default_grid(phi.dim) if grid is None else grid
    if grid.dim != phi.dim:
        raise ParameterError("grid and map dimensions differ")
    x, w = _split_points(pts, phi.dim)
    a_inv = np.linalg.inv(phi.matrix)
    g_tilde = compose(window.expr, AffineMap(a_inv))
    x_img = phi.apply(x)
    w_img = w @ a_inv  # rows of A^{-T} w
    phase = np.exp(2j * np.pi * (w @ (a_inv @ phi.offset)))
    if phi.dim == 1:
        x, w, x_img, w_img = (v[:, 0] for v in (x, w, x_img, w_img))
    lhs = stft_at(compose(u, phi), window, x, w, grid)
    rhs = phase / abs(phi.det) * stft_at(u, g_tilde, x_img, w_img, grid)
    return lhs, rhs


def covariance_check(
    u: FunctionExpr,
    window: WindowSpec,
    phi: AffineMap,
    pts,
    grid: Optional[Grid] = None,
) -> float:
    """Maximum absolute discrepancy between the two sides of the identity."""
    lhs, rhs = covariance_sides(u, window, phi, pts, grid)
    return float(np.max(np.abs(lhs - rhs)))


def _ratio(num: float, den: float, what: str) -> float:
    if den == 0:
        raise DegenerateInputError(f"{what} has zero modulation norm")
    return num / den


def affine_invariance_ratio(
    u: FunctionExpr,
    phi: MapLike,
    params: NormParams,
    window: Optional[WindowSpec] = None,
    grid: Optional[Grid] = None,
    stride: int = DEFAULT_STRIDE,
) -> float:
    """``||u o phi||_{M^{p,q}} / ||u||_{M^{p,q}}``."""
    den = modulation_norm(u, window, params, grid, stride=stride)
    num = modulation_norm(compose(u, phi), window, params, grid, stride=stride)
    return _ratio(num, den, repr(u))


def piece_decomposition(u: FunctionExpr, phi: PiecewiseAffineMap) -> list[FunctionExpr]:
    """Terms ``chi_{Q_k} * (u o phi_k)`` whose sum is ``u o phi``."""
    return [indicator(box.lower, box.upper) * compose(u, amap) for box, amap in phi.pieces]


def piecewise_ratios(
    phi: PiecewiseAffineMap,
    family: Sequence[FunctionExpr],
    p: float,
    window: Optional[WindowSpec] = None,
    grid: Optional[Grid] = None,
    stride: int = DEFAULT_STRIDE,
) -> list[float]:
    if not family:
        raise PreconditionError("test family is empty")
    params = NormParams(p, p)
    return [affine_invariance_ratio(u, phi, params, window, grid, stride) for u in family]


def piecewise_boundedness_sweep(
    phi: PiecewiseAffineMap,
    family: Sequence[FunctionExpr],
    p: float,
    window: Optional[WindowSpec] = None,
    grid: Optional[Grid] = None,
) -> tuple[float, float]:
    """``(max, min)`` of the M^{p,p} norm ratio of ``u o phi`` over the family."""
    ratios = piecewise_ratios(phi, family, p, window, grid)
    return max(ratios), min(ratios)


def nonlinear_blowup_sweep(
    phi_family: Callable[[float], NonlinearMap],
    u: FunctionExpr,
    params: NormParams,
    lambdas: Iterable[float],
    window: Optional[WindowSpec] = None,
    grid: Optional[Grid] = None,
    stride: int = DEFAULT_STRIDE,
) -> list[tuple[float, float]]:
    """Norm ratios ``||u o phi_lam|| / ||u||`` along a family of nonlinear maps.

    Each ``phi_lam`` must be invertible on the part of its domain that maps
    onto ``supp u``; :class:`~modspace.errors.DomainError` is raised otherwise.
    """
    r = u.support_radius
    if r is None:
        raise PreconditionError("blowup sweep needs a compactly supported u")
    maps = [(float(lam), phi_family(lam)) for lam in lambdas]
    for lam, phi in maps:
        if phi.preimage_radius is None:
            raise PreconditionError(f"map for lambda={lam:g} does not report its preimage")
        phi.preimage_radius(r)
    den = modulation_norm(u, window, params, grid, stride=stride)
    out = []
    for lam, phi in maps:
        num = modulation_norm(compose(u, phi), window, params, grid, stride=stride)
        out.append((lam, _ratio(num, den, repr(u))))
    return out


def chirp_blowup_sweep(
    lambdas: Iterable[float],
    params: NormParams,
    radius: float = 1.0,
    window: Optional[WindowSpec] = None,
    grid: Optional[Grid] = None,
    stride: int = DEFAULT_STRIDE,
) -> list[tuple[float, float]]:
    """Ratios ``||chirp(lam) * bump(R)|| / ||bump(R)||`` in M^{p,q}.

    Multiplying by ``exp(i pi lam t^2)`` is the nonlinear phase that a
    quadratic change of variables imposes on a plane wave; its M^{p,q} cost
    grows with ``lam``.
    """
    base = bump(radius)
    den = modulation_norm(base, window, params, grid, stride=stride)
    out = []
    for lam in lambdas:
        lam = float(lam)
        num = modulation_norm(chirp(lam) * base, window, params, grid, stride=stride)
        out.append((lam, _ratio(num, den, repr(base))))
    return out

