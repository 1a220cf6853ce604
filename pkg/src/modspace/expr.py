"""Closed-form test functions on R^d.

Expressions are small immutable trees that evaluate pointwise on arrays of
points with shape ``(M, d)``. Composition with a change of variables is
symbolic: ``compose(u, phi)`` evaluates ``u`` at ``phi(t)``, so no
interpolation ever happens.

Compact support is tracked through the tree. ``support_radius`` is either
``None`` or a radius ``R`` with ``f(t) == 0`` exactly whenever ``|t| > R``.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Optional, Union

import numpy as np

from .maps import AffineMap, Box, NonlinearMap, PiecewiseAffineMap, as_points

__all__ = [
    "FunctionExpr",
    "gaussian",
    "bump",
    "chirp",
    "plane_wave",
    "indicator",
    "constant",
    "plateau",
    "translate",
    "compose",
]

AnyMap = Union[AffineMap, PiecewiseAffineMap, NonlinearMap]


def _sqnorm(pts: np.ndarray) -> np.ndarray:
    return np.sum(pts**2, axis=-1)


class FunctionExpr:
    """Base class; subclasses implement ``_eval(pts) -> complex (M,)``."""

    support_radius: Optional[float] = None

    def __call__(self, t):
        pts, shape = as_points(t, getattr(self, "dim", None))
        out = np.asarray(self._eval(pts), dtype=complex)
        out = np.broadcast_to(out, (pts.shape[0],)).reshape(shape)
        return complex(out) if out.ndim == 0 else out

    def _eval(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def compact(self) -> bool:
        return self.support_radius is not None

    def __add__(self, other):
        return Sum((self, _lift(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Sum((self, Scaled(-1.0, _lift(other))))

    def __neg__(self):
        return Scaled(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, Number):
            return Scaled(complex(other), self)
        return Product((self, other))

    def __rmul__(self, other):
        if isinstance(other, Number):
            return Scaled(complex(other), self)
        return Product((other, self))

    def translate(self, b) -> FunctionExpr:
        return Translated(self, np.atleast_1d(np.asarray(b, dtype=float)))


def _lift(x) -> FunctionExpr:
    return x if isinstance(x, FunctionExpr) else Constant(complex(x))


@dataclass(frozen=True, repr=False)
class Constant(FunctionExpr):
    value: complex

    def _eval(self, pts):
        return np.full(pts.shape[0], self.value, dtype=complex)

    def __repr__(self):
        return f"constant({self.value})"


@dataclass(frozen=True, repr=False)
class Gaussian(FunctionExpr):
    width: float = 1.0

    def _eval(self, pts):
        return np.exp(-np.pi * _sqnorm(pts) / self.width**2)

    def __repr__(self):
        return f"gaussian({self.width:g})"


@dataclass(frozen=True, repr=False)
class Bump(FunctionExpr):
    """``exp(1 + 1/(|t/R|^2 - 1))`` inside ``B_R``, zero outside; peak 1 at 0."""

    radius: float = 1.0

    @property
    def support_radius(self):
        return self.radius

    def _eval(self, pts):
        s = _sqnorm(pts) / self.radius**2
        inside = s < 1
        out = np.zeros(pts.shape[0])
        out[inside] = np.exp(1 + 1 / (s[inside] - 1))
        return out

    def __repr__(self):
        return f"bump({self.radius:g})"


@dataclass(frozen=True, repr=False)
class Plateau(FunctionExpr):
    """1 on ``|t| <= 2R``, raised-cosine collar of width 1, 0 from ``2R + 1`` on."""

    radius: float = 1.0

    @property
    def support_radius(self):
        return 2 * self.radius + 1

    def _eval(self, pts):
        r = np.sqrt(_sqnorm(pts))
        inner = 2 * self.radius
        out = np.zeros(pts.shape[0])
        out[r <= inner] = 1.0
        collar = (r > inner) & (r < inner + 1)
        out[collar] = 0.5 * (1 + np.cos(np.pi * (r[collar] - inner)))
        return out

    def __repr__(self):
        return f"plateau({self.radius:g})"


@dataclass(frozen=True, repr=False)
class Chirp(FunctionExpr):
    """``exp(i pi rate |t|^2)``."""

    rate: float

    def _eval(self, pts):
        return np.exp(1j * np.pi * self.rate * _sqnorm(pts))

    def __repr__(self):
        return f"chirp({self.rate:g})"


@dataclass(frozen=True, repr=False, eq=False)
class PlaneWave(FunctionExpr):
    """``exp(2 pi i freq . t)``."""

    freq: np.ndarray

    def _eval(self, pts):
        freq = np.broadcast_to(self.freq, (pts.shape[1],))
        return np.exp(2j * np.pi * (pts @ freq))

    def __repr__(self):
        return f"plane_wave({np.squeeze(self.freq).tolist()})"


@dataclass(frozen=True, repr=False, eq=False)
class Indicator(FunctionExpr):
    box: Box

    @property
    def dim(self):
        return self.box.dim

    @property
    def support_radius(self):
        return self.box.radius() if self.box.bounded else None

    def _eval(self, pts):
        return self.box.contains(pts).astype(float)

    def __repr__(self):
        return f"indicator({self.box!r})"


@dataclass(frozen=True, repr=False, eq=False)
class Sum(FunctionExpr):
    terms: tuple

    @property
    def support_radius(self):
        radii = [t.support_radius for t in self.terms]
        return None if any(r is None for r in radii) else max(radii)

    def _eval(self, pts):
        out = np.zeros(pts.shape[0], dtype=complex)
        for term in self.terms:
            out = out + term._eval(pts)
        return out

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.terms)) + ")"


@dataclass(frozen=True, repr=False, eq=False)
class Product(FunctionExpr):
    factors: tuple

    @property
    def support_radius(self):
        radii = [f.support_radius for f in self.factors if f.support_radius is not None]
        return min(radii) if radii else None

    def _eval(self, pts):
        out = np.ones(pts.shape[0], dtype=complex)
        for factor in self.factors:
            out = out * factor._eval(pts)
        return out

    def __repr__(self):
        return "*".join(map(repr, self.factors))


@dataclass(frozen=True, repr=False, eq=False)
class Scaled(FunctionExpr):
    coef: complex
    inner: FunctionExpr

    @property
    def support_radius(self):
        return self.inner.support_radius

    def _eval(self, pts):
        return self.coef * self.inner._eval(pts)

    def __repr__(self):
        c = self.coef.real if self.coef.imag == 0 else self.coef
        return f"{c:g}*{self.inner!r}"


@dataclass(frozen=True, repr=False, eq=False)
class Translated(FunctionExpr):
    """``t -> inner(t - shift)``."""

    inner: FunctionExpr
    shift: np.ndarray

    @property
    def support_radius(self):
        r = self.inner.support_radius
        return None if r is None else r + float(np.linalg.norm(self.shift))

    def _eval(self, pts):
        return self.inner._eval(pts - np.broadcast_to(self.shift, (pts.shape[1],)))

    def __repr__(self):
        return f"translate({self.inner!r}, {np.squeeze(self.shift).tolist()})"


@dataclass(frozen=True, repr=False, eq=False)
class Composed(FunctionExpr):
    """``t -> inner(phi(t))``; vanishes outside the domain of a nonlinear ``phi``."""

    inner: FunctionExpr
    phi: AnyMap

    @property
    def dim(self):
        return self.phi.dim

    @property
    def support_radius(self):
        r = self.inner.support_radius
        if r is None:
            return None
        if isinstance(self.phi, NonlinearMap):
            if self.phi.preimage_radius is None:
                return None
            return self.phi.preimage_radius(r)
        return self.phi.preimage_radius(r)

    def _eval(self, pts):
        if isinstance(self.phi, NonlinearMap):
            out = np.zeros(pts.shape[0], dtype=complex)
            mask = self.phi.in_domain(pts)
            if mask.any():
                out[mask] = self.inner._eval(self.phi.apply(pts[mask]))
            return out
        return self.inner._eval(self.phi.apply(pts))

    def __repr__(self):
        return f"{self.inner!r}o{self.phi!r}"


def gaussian(width: float = 1.0) -> FunctionExpr:
    """``exp(-pi |t/width|^2)``."""
    return Gaussian(float(width))


def bump(radius: float = 1.0) -> FunctionExpr:
    return Bump(float(radius))


def plateau(radius: float = 1.0) -> FunctionExpr:
    return Plateau(float(radius))


def chirp(rate: float) -> FunctionExpr:
    return Chirp(float(rate))


def plane_wave(freq) -> FunctionExpr:
    return PlaneWave(np.atleast_1d(np.asarray(freq, dtype=float)))


def indicator(lower, upper) -> FunctionExpr:
    return Indicator(Box(lower, upper))


def constant(value: complex) -> FunctionExpr:
    return Constant(complex(value))


def translate(f: FunctionExpr, b) -> FunctionExpr:
    return f.translate(b)


def compose(u: FunctionExpr, phi: AnyMap) -> FunctionExpr:
    """The change of variables ``u o phi``."""
    return Composed(u, phi)
