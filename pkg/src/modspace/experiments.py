"""Experiment drivers behind the ``modspace`` subcommands.

Each ``cmd_*`` function takes an :class:`ExperimentConfig` and returns an
:class:`ExperimentResult`: ordered rows plus an overall pass flag.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .changeofvar import (
    chirp_blowup_sweep,
    covariance_check,
    nonlinear_blowup_sweep,
    piecewise_ratios,
)
from .errors import ParameterError
from .expr import bump, gaussian, plane_wave
from .family import FAMILY_SIZE, bump_chirp_family, test_family
from .grid import Grid, l2_norm, sample
from .maps import AffineMap, Box, PiecewiseAffineMap, abs_map, quadratic_map
from .multiplier import MultiplierSymbol, apply_multiplier, idempotence_residual
from .norms import NormParams, local_equivalence_reports, mixed_norm
from .stft import DEFAULT_STRIDE, WindowSpec, stft, worker_count

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "COVARIANCE_TOLERANCES",
    "PIECEWISE_REGRESSION",
    "cmd_local_equivalence",
    "cmd_covariance",
    "cmd_blowup",
    "cmd_piecewise",
    "cmd_multiplier",
    "COMMANDS",
]

DEFAULT_LAMBDAS = (0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)
GROWTH_THRESHOLD = {"chirp": 4.0, "quadratic": 1.1}
COVARIANCE_LIMIT = 1e-7
COVARIANCE_TOLERANCES = {"identity": 1e-12, "2x+1": 1e-8, "rotation(pi/4)": 1e-7}
# Reference run (seed 0, N=4096 and N=8192, both FFT engines): max ratio
# 1.749 at p=1 and 1.4142 at p=2. Bounds carry ~15% headroom.
PIECEWISE_REGRESSION = {1.0: 2.0, 2.0: 1.6}
PIECEWISE_SPREAD_LIMIT = 10.0
MULTIPLIER_TOL = {"identity": 1e-9, "projection": 1e-6, "idempotence": 1e-10, "unimodular": 1e-10}


def identity_pieces() -> PiecewiseAffineMap:
    """The identity split at 0 into two affine pieces."""
    ident = AffineMap.identity(1)
    return PiecewiseAffineMap([(Box(-np.inf, 0.0), ident), (Box(0.0, np.inf), ident)])


PIECEWISE_MAPS = {"abs": abs_map, "identity": identity_pieces}


def parallel_map(fn, items) -> list:
    """``[fn(x) for x in items]`` on a thread pool, results in input order."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated settings shared by all subcommands.

    ``p``/``q`` of ``None`` mean "use the subcommand's default sweep".
    """

    command: str
    n: int = 4096
    spacing: Optional[float] = None
    p: Optional[float] = None
    q: Optional[float] = None
    radius: float = 1.0
    lambdas: tuple[float, ...] = DEFAULT_LAMBDAS
    window: str = "gaussian"
    seed: int = 0
    out: Optional[str] = None
    family_size: int = FAMILY_SIZE
    full_density: bool = False
    blowup_family: str = "chirp"
    piecewise_map: str = "abs"

    def __post_init__(self):
        spacing = 32.0 / self.n if self.spacing is None else self.spacing
        object.__setattr__(self, "spacing", float(spacing))
        Grid(1, self.n, self.spacing)
        if self.p is not None:
            object.__setattr__(self, "p", NormParams(self.p, 1).p)
        if self.q is not None:
            object.__setattr__(self, "q", NormParams(1, self.q).q)
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ParameterError(f"radius must be positive, got {self.radius}")
        if any(not math.isfinite(lam) for lam in self.lambdas) or not self.lambdas:
            raise ParameterError("lambda list must be non-empty and finite")
        if self.window not in ("gaussian", "plateau"):
            raise ParameterError(f"window must be gaussian or plateau, got {self.window!r}")
        if self.family_size < 1:
            raise ParameterError("test family must have at least one member")
        if self.blowup_family not in ("chirp", "quadratic"):
            raise ParameterError(f"unknown blowup family {self.blowup_family!r}")
        if self.piecewise_map not in PIECEWISE_MAPS:
            raise ParameterError(f"unknown piecewise map {self.piecewise_map!r}")

    @property
    def grid(self) -> Grid:
        return Grid(1, self.n, self.spacing)

    @property
    def stride(self) -> int:
        return 1 if self.full_density else DEFAULT_STRIDE

    def window_spec(self) -> WindowSpec:
        if self.window == "plateau":
            return WindowSpec.plateau(self.radius)
        return WindowSpec.default(1)

    def describe(self) -> str:
        return (
            f"modspace {self.command} grid=N{self.n}:h{self.spacing!r} window={self.window} "
            f"stride={self.stride} seed={self.seed}"
        )


@dataclass
class ExperimentResult:
    rows: list[dict] = field(default_factory=list)
    passed: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def columns(self) -> list[str]:
        cols: list[str] = []
        for row in self.rows:
            cols.extend(k for k in row if k not in cols)
        return cols


def _fmt_exp(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:g}"


def cmd_local_equivalence(cfg: ExperimentConfig) -> ExperimentResult:
    """Both local norm bounds for every family member and exponent pair."""
    ps = [cfg.p] if cfg.p is not None else [1.0, 2.0, math.inf]
    qs = [cfg.q] if cfg.q is not None else [1.0, 2.0]
    params = [NormParams(p, q) for p in ps for q in qs]
    res = ExperimentResult()
    family = test_family(cfg.seed, cfg.radius, cfg.family_size)
    all_reports = parallel_map(
        lambda u: local_equivalence_reports(u, params, cfg.radius, cfg.grid, cfg.stride), family
    )
    for i, (u, reports) in enumerate(zip(family, all_reports)):
        for rep in reports:
            ok = rep.forward_satisfied and rep.reverse_satisfied
            res.passed &= ok
            res.rows.append({
                "experiment": "local_equivalence",
                "member": i,
                "function": repr(u),
                "p": _fmt_exp(rep.params.p),
                "q": _fmt_exp(rep.params.q),
                "radius": rep.radius,
                "mod_norm": rep.mod_norm,
                "fl_norm": rep.fl_norm,
                "plateau_norm": rep.plateau_norm,
                "forward_constant": rep.forward_constant,
                "reverse_constant": rep.reverse_constant,
                "forward_bound": rep.forward_bound,
                "reverse_bound": rep.reverse_bound,
                "forward_ok": rep.forward_satisfied,
                "reverse_ok": rep.reverse_satisfied,
            })
    return res


def covariance_points(dim: int) -> np.ndarray:
    """5x5 lattice of ``(x, w)`` in [-1, 1]^2 (d=1) or a seeded set of 25 pairs (d=2)."""
    if dim == 1:
        ax = np.linspace(-1.0, 1.0, 5)
        return np.array([(x, w) for x in ax for w in ax])
    rng = np.random.default_rng(2024)
    return rng.uniform(-1.0, 1.0, size=(25, 2, 2))


def cmd_covariance(cfg: ExperimentConfig) -> ExperimentResult:
    res = ExperimentResult()
    window = WindowSpec.gaussian(1.0)
    cases = [
        ("identity", AffineMap.identity(1), cfg.grid, window),
        ("2x+1", AffineMap(2.0, 1.0), cfg.grid, window),
        ("rotation(pi/4)", AffineMap.rotation(np.pi / 4), Grid(2, 256, 1 / 16), WindowSpec.gaussian(1.0, dim=2)),
    ]
    for name, phi, grid, win in cases:
        dev = covariance_check(gaussian(1.0), win, phi, covariance_points(phi.dim), grid)
        tol = min(COVARIANCE_TOLERANCES[name], COVARIANCE_LIMIT)
        ok = dev <= tol
        res.passed &= ok
        res.rows.append({
            "experiment": "covariance",
            "map": name,
            "dim": phi.dim,
            "grid_n": grid.n,
            "spacing": grid.spacing,
            "max_deviation": dev,
            "tolerance": tol,
            "ok": ok,
        })
    return res


def growth_flags(sweep: list[tuple[float, float]]) -> tuple[bool, float]:
    """Monotone nondecreasing flag and ``r(max lam) / r(reference lam)``.

    The reference is ``lam = 1`` when present, else the smallest positive ``lam``.
    """
    ordered = sorted(sweep)
    ratios = [r for _, r in ordered]
    monotone = all(b >= a for a, b in zip(ratios, ratios[1:]))
    positive = [(lam, r) for lam, r in ordered if lam > 0]
    if not positive:
        return monotone, 1.0
    ref = dict(positive).get(1.0, positive[0][1])
    return monotone, positive[-1][1] / ref


def cmd_blowup(cfg: ExperimentConfig) -> ExperimentResult:
    params = NormParams(cfg.p if cfg.p is not None else 1.0, cfg.q if cfg.q is not None else 1.0)
    window = cfg.window_spec()
    if cfg.blowup_family == "chirp":
        sweep = chirp_blowup_sweep(cfg.lambdas, params, cfg.radius, window, cfg.grid, cfg.stride)
        label = f"chirp(lam)*bump({cfg.radius:g})"
    else:
        u = plane_wave(8.0) * bump(cfg.radius)
        sweep = nonlinear_blowup_sweep(quadratic_map, u, params, cfg.lambdas, window, cfg.grid, cfg.stride)
        label = f"u(x + lam x^2), u={u!r}"
    res = ExperimentResult()
    for lam, ratio in sweep:
        res.rows.append({
            "experiment": "blowup",
            "family": label,
            "p": _fmt_exp(params.p),
            "q": _fmt_exp(params.q),
            "lambda": lam,
            "ratio": ratio,
        })
    monotone, growth = growth_flags(sweep)
    threshold = GROWTH_THRESHOLD[cfg.blowup_family]
    grows = growth >= threshold
    res.rows.append({
        "experiment": "blowup_summary",
        "family": label,
        "p": _fmt_exp(params.p),
        "q": _fmt_exp(params.q),
        "monotone": monotone,
        "growth": growth,
        "growth_threshold": threshold,
        "growth_ok": grows,
    })
    res.passed = monotone and grows
    if math.isinf(params.q):
        res.notes.append("q=inf: no ground truth; flags reported, not asserted")
        res.passed = True
    return res


def cmd_piecewise(cfg: ExperimentConfig) -> ExperimentResult:
    p = cfg.p if cfg.p is not None else 2.0
    q = cfg.q if cfg.q is not None else p
    if q != p:
        raise ParameterError("piecewise-affine boundedness is stated on M^{p,p}: --q must equal --p")
    phi = PIECEWISE_MAPS[cfg.piecewise_map]()
    family = bump_chirp_family(cfg.seed, cfg.family_size)
    window = cfg.window_spec()
    ratios = [
        r[0] for r in parallel_map(lambda u: piecewise_ratios(phi, [u], p, window, cfg.grid, cfg.stride), family)
    ]
    res = ExperimentResult()
    for i, (u, r) in enumerate(zip(family, ratios)):
        res.rows.append({
            "experiment": "piecewise", "map": cfg.piecewise_map, "member": i,
            "function": repr(u), "p": _fmt_exp(p), "ratio": r,
        })
    bound = PIECEWISE_REGRESSION.get(p) if cfg.piecewise_map == "abs" else 1.0 + 1e-9
    hi, lo = max(ratios), min(ratios)
    ok = math.isfinite(hi) and lo > 0 and hi / lo < PIECEWISE_SPREAD_LIMIT
    if bound is not None:
        ok &= hi < bound
    else:
        res.notes.append(f"no regression constant recorded for p={p:g}; only finiteness checked")
    res.passed = ok
    res.rows.append({
        "experiment": "piecewise_summary",
        "map": cfg.piecewise_map,
        "p": _fmt_exp(p),
        "max_ratio": hi,
        "min_ratio": lo,
        "spread": hi / lo if lo > 0 else math.inf,
        "regression_bound": bound if bound is not None else "",
        "ok": ok,
    })
    return res


def _symbols() -> list[tuple[str, MultiplierSymbol]]:
    quad = MultiplierSymbol.chirp(lambda xi: np.pi * xi[:, 0] ** 2, "exp(i pi xi^2)")
    return [
        ("identity", MultiplierSymbol.constant(1.0)),
        ("projection", MultiplierSymbol.cube_indicator(0.0, 1.0)),
        ("unimodular", MultiplierSymbol.sigma0()),
        ("unimodular", quad),
    ]


def cmd_multiplier(cfg: ExperimentConfig) -> ExperimentResult:
    params = NormParams(cfg.p if cfg.p is not None else 2.0, cfg.q if cfg.q is not None else 2.0)
    grid, window = cfg.grid, cfg.window_spec()
    family = test_family(cfg.seed, 1.0, cfg.family_size)
    symbols = _symbols()

    def run(f):
        s = sample(f, grid)
        den = mixed_norm(stft(s, window, grid, stride=cfg.stride), params)
        out = []
        for role, sigma in symbols:
            h = apply_multiplier(sigma, s)
            ratio = mixed_norm(stft(h, window, grid, stride=cfg.stride), params) / den
            resid = idempotence_residual(sigma, s) if role == "projection" else None
            out.append((role, sigma, ratio, l2_norm(h) / l2_norm(s), resid))
        return out

    res = ExperimentResult()
    for i, (f, measured) in enumerate(zip(family, parallel_map(run, family))):
        for role, sigma, ratio, l2_ratio, resid in measured:
            row = {
                "experiment": "multiplier",
                "symbol": sigma.label,
                "member": i,
                "function": repr(f),
                "p": _fmt_exp(params.p),
                "q": _fmt_exp(params.q),
                "norm_ratio": ratio,
                "l2_ratio": l2_ratio,
                "idempotence_residual": "",
            }
            if role == "identity":
                ok = abs(ratio - 1) <= MULTIPLIER_TOL["identity"]
            elif role == "projection":
                row["idempotence_residual"] = resid
                ok = resid <= MULTIPLIER_TOL["idempotence"] and l2_ratio <= 1 + MULTIPLIER_TOL["projection"]
                if params.p == 2 and params.q == 2:
                    ok &= ratio <= 1 + MULTIPLIER_TOL["projection"]
            else:
                ok = abs(l2_ratio - 1) <= MULTIPLIER_TOL["unimodular"]
            row["ok"] = ok
            res.passed &= ok
            res.rows.append(row)
    return res


COMMANDS = {
    "local-equivalence": cmd_local_equivalence,
    "covariance": cmd_covariance,
    "blowup": cmd_blowup,
    "piecewise": cmd_piecewise,
    "multiplier": cmd_multiplier,
}
