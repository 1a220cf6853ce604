"""Power-of-two FFTs.

Two engines implement the same unnormalized DFT: ``"numpy"`` (pocketfft,
the default) and ``"radix2"``, a from-scratch decimation-in-time transform.
Select with :func:`set_engine` or the ``MODSPACE_FFT`` environment variable.
"""
import os
from functools import lru_cache

import numpy as np

from .errors import ParameterError

__all__ = ["fft", "ifft", "fftn", "ifftn", "dft_direct", "radix2_fft", "set_engine", "get_engine"]

ENGINES = ("numpy", "radix2")
_engine = os.environ.get("MODSPACE_FFT", "numpy")
if _engine not in ENGINES:
    raise ParameterError(f"MODSPACE_FFT must be one of {ENGINES}, got {_engine!r}")


def set_engine(name: str) -> str:
    """Switch the FFT engine; returns the previous one."""
    global _engine
    if name not in ENGINES:
        raise ParameterError(f"unknown FFT engine {name!r}; choose from {ENGINES}")
    previous, _engine = _engine, name
    return previous


def get_engine() -> str:
    return _engine


BASE = 32


@lru_cache(maxsize=16)
def _base_matrix(m: int, sign: int) -> np.ndarray:
    k = np.arange(m)
    mat = np.exp(sign * 2j * np.pi * (np.outer(k, k) % m) / m)
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=64)
def _twiddles(m: int, sign: int) -> np.ndarray:
    w = np.exp(sign * 1j * np.pi * np.arange(m) / m)[:, None]
    w.setflags(write=False)
    return w


def _transform_last(a: np.ndarray, sign: int) -> np.ndarray:
    """Decimation in time: direct DFTs of the ``n/BASE`` strided subsequences,
    then radix-2 merges, each doubling the transform length."""
    n = a.shape[-1]
    _check_length(n)
    batch = a.shape[:-1]
    b = int(np.prod(batch, dtype=int))
    m = min(n, BASE)
    cols = n // m
    # column c of each block holds the DFT of x[c], x[c + cols], x[c + 2 cols], ...
    x = np.asarray(a, dtype=complex).reshape(b, m, cols).transpose(1, 0, 2).reshape(m, b * cols)
    cur = np.ascontiguousarray((_base_matrix(m, sign) @ x).reshape(m, b, cols).transpose(1, 0, 2))
    nxt = np.empty_like(cur)
    rows = m
    while rows < n:
        half = cols // 2
        cur = cur.reshape(b, rows, cols)
        nxt = nxt.reshape(b, 2 * rows, half)
        even = cur[:, :, :half]
        odd = nxt[:, rows:, :]
        np.multiply(cur[:, :, half:], _twiddles(rows, sign), out=odd)
        np.add(even, odd, out=nxt[:, :rows, :])
        np.subtract(even, odd, out=odd)
        cur, nxt = nxt, cur
        rows *= 2
        cols = half
    return cur.reshape(batch + (n,))


def _check_length(n: int) -> None:
    if n == 0 or n & (n - 1):
        raise ParameterError(f"FFT length must be a power of two, got {n}")


def radix2_fft(a, axis: int = -1, inverse: bool = False) -> np.ndarray:
    """The from-scratch engine; ``inverse`` flips the sign without the 1/N factor."""
    a = np.moveaxis(np.asarray(a), axis, -1)
    return np.moveaxis(_transform_last(a, +1 if inverse else -1), -1, axis)


def fft(a, axis: int = -1) -> np.ndarray:
    """Unnormalized forward DFT ``X[k] = sum_n x[n] exp(-2 pi i k n / N)``."""
    a = np.asarray(a)
    _check_length(a.shape[axis])
    if _engine == "radix2":
        return radix2_fft(a, axis)
    return np.fft.fft(a, axis=axis)


def ifft(a, axis: int = -1) -> np.ndarray:
    """Inverse DFT including the ``1/N`` factor."""
    a = np.asarray(a)
    n = a.shape[axis]
    _check_length(n)
    if _engine == "radix2":
        return radix2_fft(a, axis, inverse=True) / n
    return np.fft.ifft(a, axis=axis)


def fftn(a, axes) -> np.ndarray:
    out = np.asarray(a)
    for ax in axes:
        out = fft(out, axis=ax)
    return out


def ifftn(a, axes) -> np.ndarray:
    out = np.asarray(a)
    for ax in axes:
        out = ifft(out, axis=ax)
    return out


def dft_direct(x, sign: int = -1) -> np.ndarray:
    """O(N^2) reference DFT, for testing."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    k = np.arange(n)
    mat = np.exp(sign * 2j * np.pi * (np.outer(k, k) % n) / n)
    return x @ mat.T
