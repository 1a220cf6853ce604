"""Mixed-norm functionals: M^{p,q}, Fourier-Lebesgue FL^q, and the local
two-sided equivalence between them for compactly supported functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import ParameterError, PreconditionError
from .expr import FunctionExpr
from .grid import Grid, SampledSignal, default_grid, sample
from .spectral import forward_ft
from .stft import DEFAULT_STRIDE, TFMatrix, WindowSpec, stft

__all__ = [
    "NormParams",
    "EquivalenceReport",
    "parse_exponent",
    "ball_volume",
    "lp_norm",
    "mixed_norm",
    "modulation_norm",
    "modulation_norms",
    "fourier_lebesgue_norm",
    "local_equivalence_report",
    "local_equivalence_reports",
]

DEFAULT_SLACK = 0.02


def parse_exponent(value: Union[str, float, int]) -> float:
    """Accept a number >= 1 or the literal ``inf``."""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "oo"):
            return math.inf
        try:
            value = float(text)
        except ValueError:
            raise ParameterError(f"exponent must be a number or 'inf', got {value!r}") from None
    value = float(value)
    if math.isnan(value) or value < 1:
        raise ParameterError(f"exponent must lie in [1, inf], got {value}")
    return value


@dataclass(frozen=True)
class NormParams:
    """Exponents of the mixed norm: ``p`` over time, ``q`` over frequency."""

    p: float = 2.0
    q: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "p", parse_exponent(self.p))
        object.__setattr__(self, "q", parse_exponent(self.q))

    def __str__(self):
        fmt = lambda v: "inf" if math.isinf(v) else f"{v:g}"
        return f"({fmt(self.p)},{fmt(self.q)})"


def ball_volume(r: float, dim: int) -> float:
    if dim == 1:
        return 2.0 * r
    if dim == 2:
        return math.pi * r * r
    raise ParameterError(f"unsupported dimension {dim}")


def lp_norm(values: np.ndarray, cell: float, p: float, axis=None) -> np.ndarray:
    """Riemann-sum L^p norm of ``|values|``; the maximum when ``p`` is infinite."""
    a = np.abs(values)
    if math.isinf(p):
        return np.max(a, axis=axis, initial=0.0)
    if p == 1:
        return np.sum(a, axis=axis) * cell
    if p == 2:
        return np.sqrt(np.sum(a * a, axis=axis) * cell)
    return (np.sum(a**p, axis=axis) * cell) ** (1.0 / p)


def mixed_norm(m: TFMatrix, params: NormParams) -> float:
    """L^{p,q} norm: inner L^p over the time index, outer L^q over frequency."""
    if not isinstance(params, NormParams):
        raise ParameterError(f"expected NormParams, got {type(params).__name__}")
    inner = lp_norm(m.values, m.time_spacing, params.p, axis=0)
    return float(lp_norm(inner, m.freq_spacing, params.q))


def modulation_norm(
    f: Union[FunctionExpr, SampledSignal],
    window: Optional[WindowSpec] = None,
    params: NormParams = NormParams(),
    grid: Optional[Grid] = None,
    lattice: Optional[Grid] = None,
    stride: int = DEFAULT_STRIDE,
) -> float:
    return mixed_norm(stft(f, window, grid, lattice, stride), params)


def modulation_norms(
    f: Union[FunctionExpr, SampledSignal],
    params: Iterable[NormParams],
    window: Optional[WindowSpec] = None,
    grid: Optional[Grid] = None,
    lattice: Optional[Grid] = None,
    stride: int = DEFAULT_STRIDE,
) -> list[float]:
    """Several M^{p,q} norms from a single STFT."""
    m = stft(f, window, grid, lattice, stride)
    return [mixed_norm(m, pq) for pq in params]


def fourier_lebesgue_norm(
    f: Union[FunctionExpr, SampledSignal], q: float, grid: Optional[Grid] = None
) -> float:
    """``||f^||_{L^q}`` on the frequency grid."""
    q = parse_exponent(q)
    if isinstance(f, SampledSignal):
        s = f
    else:
        s = sample(f, default_grid() if grid is None else grid)
    sp = forward_ft(s)
    return float(lp_norm(sp.values, sp.grid.cell_volume, q))


@dataclass(frozen=True)
class EquivalenceReport:
    """Both directions of the local equivalence ``M^{p,q}|_K = FL^q|_K``.

    Forward: ``||u||_{M^{p,q}} <= |B_{2R}|^{1/p} ||g^||_{L^1} ||u^||_{L^q}`` with a
    window supported in ``B_R``. Reverse: ``||u^||_{L^q} <= |B_R|^{-1/p}
    ||V_g u||_{L^{p,q}}`` with a window equal to 1 on ``B_{2R}``.
    """

    radius: float
    params: NormParams
    mod_norm: float
    fl_norm: float
    plateau_norm: float
    forward_constant: float
    reverse_constant: float
    forward_violation: float
    reverse_violation: float
    slack: float

    @property
    def forward_bound(self) -> float:
        return self.forward_constant * self.fl_norm

    @property
    def reverse_bound(self) -> float:
        return self.reverse_constant * self.plateau_norm

    @property
    def forward_satisfied(self) -> bool:
        return self.forward_violation <= self.slack

    @property
    def reverse_satisfied(self) -> bool:
        return self.reverse_violation <= self.slack


def _violation(lhs: float, rhs: float) -> float:
    """Relative amount by which ``lhs`` exceeds ``rhs``; 0 when the bound holds."""
    if lhs <= rhs:
        return 0.0
    return (lhs - rhs) / rhs if rhs > 0 else math.inf


def _support_radius(u: FunctionExpr, radius: Optional[float]) -> float:
    r_u = u.support_radius
    if r_u is None:
        raise PreconditionError(f"{u!r} is not known to be compactly supported")
    if radius is None:
        return r_u
    if radius < r_u:
        raise PreconditionError(f"support radius {r_u:g} exceeds the requested R={radius:g}")
    return float(radius)


def local_equivalence_reports(
    u: FunctionExpr,
    params: Sequence[NormParams],
    radius: Optional[float] = None,
    grid: Optional[Grid] = None,
    stride: int = DEFAULT_STRIDE,
    slack: float = DEFAULT_SLACK,
) -> list[EquivalenceReport]:
    """:func:`local_equivalence_report` for several exponent pairs, sharing STFTs."""
    r = _support_radius(u, radius)
    grid = default_grid() if grid is None else grid
    d = grid.dim
    bump_window = WindowSpec.bump(r)
    plateau_window = WindowSpec.plateau(r)
    m_fwd = stft(u, bump_window, grid, stride=stride)
    m_rev = stft(u, plateau_window, grid, stride=stride)
    g_l1 = bump_window.fourier_l1(grid)
    sp = forward_ft(sample(u, grid))

    reports = []
    for pq in params:
        fl = float(lp_norm(sp.values, sp.grid.cell_volume, pq.q))
        mod = mixed_norm(m_fwd, pq)
        plat = mixed_norm(m_rev, pq)
        inv_p = 0.0 if math.isinf(pq.p) else 1.0 / pq.p
        c_fwd = ball_volume(2 * r, d) ** inv_p * g_l1
        c_rev = ball_volume(r, d) ** (-inv_p)
        reports.append(EquivalenceReport(
            radius=r,
            params=pq,
            mod_norm=mod,
            fl_norm=fl,
            plateau_norm=plat,
            forward_constant=c_fwd,
            reverse_constant=c_rev,
            forward_violation=_violation(mod, c_fwd * fl),
            reverse_violation=_violation(fl, c_rev * plat),
            slack=slack,
        ))
    return reports


def local_equivalence_report(
    u: FunctionExpr,
    params: NormParams,
    radius: Optional[float] = None,
    grid: Optional[Grid] = None,
    stride: int = DEFAULT_STRIDE,
    slack: float = DEFAULT_SLACK,
) -> EquivalenceReport:
    """Check both local norm bounds for ``u`` supported in ``B_R(0)``.

    ``R`` defaults to the support radius tracked by ``u``.
    """
    return local_equivalence_reports(u, [params], radius, grid, stride, slack)[0]
