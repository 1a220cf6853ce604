"""Changes of variables: affine, piecewise-affine and nonlinear maps of R^d."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import CoverageError, DomainError, ParameterError

__all__ = [
    "Box",
    "AffineMap",
    "PiecewiseAffineMap",
    "NonlinearMap",
    "abs_map",
    "quadratic_map",
    "as_points",
]

DET_TOL = 1e-12
CONTINUITY_TOL = 1e-10
FACE_SAMPLES = 100


def as_points(t, dim: Optional[int] = None) -> tuple[np.ndarray, tuple[int, ...]]:
    """Coerce ``t`` into an ``(M, d)`` array; also return the output shape.

    Scalars and 1-D arrays are read as points of R^1. Arrays with ``ndim >= 2``
    carry the coordinate on the last axis.
    """
    arr = np.asarray(t, dtype=float)
    if arr.ndim == 0:
        return arr.reshape(1, 1), ()
    if arr.ndim == 1 and (dim is None or dim == 1):
        return arr.reshape(-1, 1), arr.shape
    if arr.ndim == 1:
        return arr.reshape(1, -1), ()
    return arr.reshape(-1, arr.shape[-1]), arr.shape[:-1]


@dataclass(frozen=True, eq=False)
class Box:
    """Half-open axis-aligned box ``[lower, upper)``; bounds may be infinite."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        lo, hi = np.broadcast_arrays(lo, hi)
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(hi <= lo):
            raise ParameterError(f"degenerate box [{lo}, {hi})")
        object.__setattr__(self, "lower", lo.copy())
        object.__setattr__(self, "upper", hi.copy())

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def bounded(self) -> bool:
        return bool(np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper)))

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return np.all((pts >= self.lower) & (pts < self.upper), axis=-1)

    def radius(self) -> float:
        """Euclidean radius of the smallest origin-centered ball holding the box."""
        return float(np.linalg.norm(np.maximum(np.abs(self.lower), np.abs(self.upper))))

    def interiors_overlap(self, other: Box) -> bool:
        lo = np.maximum(self.lower, other.lower)
        hi = np.minimum(self.upper, other.upper)
        return bool(np.all(lo < hi))

    def __repr__(self):
        return f"Box({self.lower.tolist()}, {self.upper.tolist()})"


@dataclass(frozen=True, eq=False)
class AffineMap:
    """``x -> matrix @ x + offset`` with invertible ``matrix``."""

    matrix: np.ndarray
    offset: np.ndarray = field(default=None)

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if a.shape[0] != a.shape[1]:
            raise ParameterError(f"matrix must be square, got shape {a.shape}")
        b = np.zeros(a.shape[0]) if self.offset is None else np.atleast_1d(np.asarray(self.offset, dtype=float))
        b = np.broadcast_to(b, (a.shape[0],)).copy()
        if abs(np.linalg.det(a)) <= DET_TOL:
            raise ParameterError(f"affine map is not invertible (det={np.linalg.det(a):g})")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "offset", b)

    @classmethod
    def identity(cls, dim: int = 1) -> AffineMap:
        return cls(np.eye(dim))

    @classmethod
    def translation(cls, b) -> AffineMap:
        b = np.atleast_1d(np.asarray(b, dtype=float))
        return cls(np.eye(b.shape[0]), b)

    @classmethod
    def rotation(cls, theta: float) -> AffineMap:
        c, s = np.cos(theta), np.sin(theta)
        return cls(np.array([[c, -s], [s, c]]))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def __call__(self, t):
        pts, shape = as_points(t, self.dim)
        out = pts @ self.matrix.T + self.offset
        return out.reshape(shape + (self.dim,)) if self.dim > 1 else out.reshape(shape)

    def apply(self, pts: np.ndarray) -> np.ndarray:
        return pts @ self.matrix.T + self.offset

    def inverse(self) -> AffineMap:
        inv = np.linalg.inv(self.matrix)
        return AffineMap(inv, -inv @ self.offset)

    def compose(self, inner: AffineMap) -> AffineMap:
        """``self o inner``."""
        return AffineMap(self.matrix @ inner.matrix, self.matrix @ inner.offset + self.offset)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(self.dim)) and not np.any(self.offset))

    def preimage_radius(self, r: float) -> float:
        """Radius of a ball holding ``phi^{-1}(B_r(0))``."""
        inv = np.linalg.inv(self.matrix)
        return float(np.linalg.norm(inv, 2) * (r + np.linalg.norm(self.offset)))

    def check_inverse(self, pts: np.ndarray, tol: float = 1e-12) -> bool:
        back = self.inverse().apply(self.apply(pts))
        return bool(np.max(np.abs(back - pts), initial=0.0) <= tol * (1 + np.max(np.abs(pts), initial=0.0)))

    def __repr__(self):
        if self.dim == 1:
            return f"AffineMap({self.matrix[0, 0]:g}x + {self.offset[0]:g})"
        return f"AffineMap({self.matrix.tolist()}, {self.offset.tolist()})"


@dataclass(frozen=True, eq=False)
class PiecewiseAffineMap:
    """Continuous map that is affine on each of finitely many half-open boxes.

    ``working_extent`` bounds the region used to sample shared faces of
    infinite boxes in the continuity check.
    """

    pieces: tuple[tuple[Box, AffineMap], ...]
    working_extent: float = 16.0

    def __post_init__(self):
        pieces = tuple((box, amap) for box, amap in self.pieces)
        if not pieces:
            raise ParameterError("piecewise map needs at least one piece")
        dims = {box.dim for box, _ in pieces} | {amap.dim for _, amap in pieces}
        if len(dims) != 1:
            raise ParameterError("pieces disagree on dimension")
        object.__setattr__(self, "pieces", pieces)
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                if pieces[i][0].interiors_overlap(pieces[j][0]):
                    raise ParameterError(f"pieces {i} and {j} have overlapping interiors")
        self._check_continuity()

    @property
    def dim(self) -> int:
        return self.pieces[0][1].dim

    def _shared_face_points(self, a: Box, b: Box) -> Optional[np.ndarray]:
        w = self.working_extent
        for axis in range(self.dim):
            if a.upper[axis] == b.lower[axis]:
                plane = a.upper[axis]
            elif b.upper[axis] == a.lower[axis]:
                plane = a.lower[axis]
            else:
                continue
            lo = np.clip(np.maximum(a.lower, b.lower), -w, w)
            hi = np.clip(np.minimum(a.upper, b.upper), -w, w)
            others = [k for k in range(self.dim) if k != axis]
            if any(lo[k] >= hi[k] for k in others):
                continue
            pts = np.empty((FACE_SAMPLES, self.dim))
            pts[:, axis] = plane
            for k in others:
                pts[:, k] = np.linspace(lo[k], hi[k], FACE_SAMPLES)
            return pts
        return None

    def _check_continuity(self):
        for i, (box_a, map_a) in enumerate(self.pieces):
            for box_b, map_b in self.pieces[i + 1:]:
                pts = self._shared_face_points(box_a, box_b)
                if pts is None:
                    continue
                gap = np.max(np.abs(map_a.apply(pts) - map_b.apply(pts)))
                if gap > CONTINUITY_TOL * (1 + np.max(np.abs(pts))):
                    raise ParameterError(f"piecewise map is discontinuous across a face (gap {gap:.3g})")

    def piece_index(self, pts: np.ndarray) -> np.ndarray:
        idx = np.full(pts.shape[0], -1)
        for k, (box, _) in enumerate(self.pieces):
            idx[box.contains(pts) & (idx < 0)] = k
        return idx

    def apply(self, pts: np.ndarray) -> np.ndarray:
        idx = self.piece_index(pts)
        if np.any(idx < 0):
            bad = pts[int(np.argmax(idx < 0))]
            raise CoverageError(f"point {tuple(map(float, bad))} lies in no piece")
        out = np.empty_like(pts)
        for k, (_, amap) in enumerate(self.pieces):
            mask = idx == k
            if mask.any():
                out[mask] = amap.apply(pts[mask])
        return out

    def __call__(self, t):
        pts, shape = as_points(t, self.dim)
        out = self.apply(pts)
        return out.reshape(shape + (self.dim,)) if self.dim > 1 else out.reshape(shape)

    def check_coverage(self, pts: np.ndarray) -> None:
        """Every point must lie in exactly one half-open piece."""
        hits = sum(box.contains(pts).astype(int) for box, _ in self.pieces)
        if np.any(hits != 1):
            bad = pts[int(np.argmax(hits != 1))]
            raise CoverageError(f"point {tuple(map(float, bad))} lies in {hits[np.argmax(hits != 1)]} pieces")

    def preimage_radius(self, r: float) -> float:
        return max(amap.preimage_radius(r) for _, amap in self.pieces)

    def __repr__(self):
        return "PiecewiseAffineMap(" + ", ".join(f"{b!r}: {m!r}" for b, m in self.pieces) + ")"


def abs_map() -> PiecewiseAffineMap:
    """``x -> |x|`` on R as a two-piece map."""
    return PiecewiseAffineMap((
        (Box(-np.inf, 0.0), AffineMap(-1.0)),
        (Box(0.0, np.inf), AffineMap(1.0)),
    ))


@dataclass(frozen=True, eq=False)
class NonlinearMap:
    """Differentiable map with an explicit Jacobian.

    ``domain`` is the open region on which the map is used; composition
    vanishes outside it. ``preimage_radius(r)`` bounds the part of the domain
    mapped into ``B_r(0)``; leave it ``None`` when unknown.
    """

    func: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    dim: int = 1
    smoothness: str = "C2"
    domain: Optional[Box] = None
    preimage_radius: Optional[Callable[[float], float]] = None
    name: str = "nonlinear"

    def __post_init__(self):
        if self.smoothness not in ("C1", "C2"):
            raise ParameterError(f"smoothness must be C1 or C2, got {self.smoothness!r}")

    def in_domain(self, pts: np.ndarray) -> np.ndarray:
        if self.domain is None:
            return np.ones(pts.shape[0], dtype=bool)
        return np.all((pts > self.domain.lower) & (pts < self.domain.upper), axis=-1)

    def apply(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(pts), dtype=float).reshape(pts.shape)

    def __call__(self, t):
        pts, shape = as_points(t, self.dim)
        out = self.apply(pts)
        return out.reshape(shape + (self.dim,)) if self.dim > 1 else out.reshape(shape)

    def jacobian_at(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(self.jacobian(pts), dtype=float).reshape(pts.shape[0], self.dim, self.dim)

    def jacobian_residual(self, pts: np.ndarray) -> float:
        """Max deviation between the Jacobian and central differences."""
        h = 1e-5 * (1 + np.abs(pts))
        fd = np.empty((pts.shape[0], self.dim, self.dim))
        for k in range(self.dim):
            step = np.zeros_like(pts)
            step[:, k] = h[:, k]
            fd[:, :, k] = (self.apply(pts + step) - self.apply(pts - step)) / (2 * h[:, k : k + 1])
        return float(np.max(np.abs(fd - self.jacobian_at(pts))))

    def __repr__(self):
        return f"NonlinearMap({self.name})"


def quadratic_map(lam: float) -> NonlinearMap:
    """``x -> x + lam * x**2`` on its increasing branch.

    For ``lam > 0`` the branch is ``x > -1/(2 lam)``, where the map increases
    from ``-1/(4 lam)`` to infinity.
    """
    lam = float(lam)

    def func(p):
        return p + lam * p**2

    def jac(p):
        return (1 + 2 * lam * p).reshape(-1, 1, 1)

    if lam == 0:
        return NonlinearMap(func, jac, domain=None, preimage_radius=lambda r: r, name="x")

    edge = -1.0 / (2 * lam)
    domain = Box(edge, np.inf) if lam > 0 else Box(-np.inf, edge)

    def preimage(r):
        if 4 * abs(lam) * r >= 1:
            raise DomainError(
                f"x + {lam:g}x^2 does not invert on [-{r:g}, {r:g}] within its monotone branch"
            )
        roots = [(-1 + np.sqrt(1 + 4 * lam * s)) / (2 * lam) for s in (-r, r)]
        return float(max(abs(x) for x in roots))

    return NonlinearMap(func, jac, domain=domain, preimage_radius=preimage, name=f"x + {lam:g}x^2")
