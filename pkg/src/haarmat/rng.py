"""Seedable random streams and standard normal variates over R, C and H.

A stream is identified by ``(seed, stream_index)``.  The pair is folded into a
single 64-bit key with SplitMix64::

    key = splitmix64(splitmix64(seed) ^ (stream_index * 0x9E3779B97F4A7C15 mod 2**64))

and the key seeds a PCG64 bit generator.  Distinct stream indices give
unrelated keys, so work can be split across streams without shared state.

Normalisation follows the Ginibre densities used throughout the package:

=========== ======================= =================
kind        density                 second moment
=========== ======================= =================
real        exp(-x**2/2)/sqrt(2 pi) E x**2 = 1
complex     exp(-|z|**2)/pi         E |z|**2 = 1
quaternion  exp(-||q||**2)/pi**2    E ||q||**2 = 2
=========== ======================= =================
"""
from __future__ import annotations

import enum

import numpy as np

__all__ = [
    "NormalScalarKind",
    "RngStream",
    "ginibre_matrix",
    "normal_complex",
    "normal_quaternion",
    "normal_real",
    "splitmix64",
    "stream_key",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class NormalScalarKind(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"
    QUATERNION = "quaternion"


def splitmix64(x: int) -> int:
    """One SplitMix64 finalisation step on a 64-bit integer."""
    z = (x + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, stream_index: int = 0) -> int:
    """Mix ``seed`` and ``stream_index`` into the 64-bit key of a stream."""
    s = splitmix64(int(seed) & _MASK64)
    return splitmix64(s ^ ((int(stream_index) * _GOLDEN) & _MASK64))


class RngStream:
    """A single-threaded stream of pseudo-random numbers.

    Parameters
    ----------
    seed : int
        64-bit seed; negative values are reduced modulo ``2**64``.
    stream_index : int
        Index of the sub-stream derived from ``seed``.
    """

    def __init__(self, seed: int = 0, stream_index: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream_index = int(stream_index) & _MASK64
        self.key = stream_key(self.seed, self.stream_index)
        self._gen = np.random.Generator(np.random.PCG64(self.key))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_index={self.stream_index})"

    def spawn(self, stream_index: int) -> "RngStream":
        """A fresh stream with the same seed and a different index."""
        return RngStream(self.seed, stream_index)

    def standard_normal(self, size=None):
        """Draw N(0, 1) variates; ``size`` as in numpy."""
        return self._gen.standard_normal(size)

    def integers(self, low: int, high: int) -> int:
        """A uniform integer in ``[low, high)``."""
        return int(self._gen.integers(low, high))

    def uniform(self, size=None):
        return self._gen.random(size)


def normal_real(rng: RngStream) -> float:
    return float(rng.standard_normal())


def normal_complex(rng: RngStream) -> complex:
    """Complex normal with independent N(0, 1/2) real and imaginary parts."""
    re, im = rng.standard_normal(2)
    return complex(re, im) / np.sqrt(2.0)


def normal_quaternion(rng: RngStream):
    """Quaternion with four independent N(0, 1/2) coefficients."""
    from .quaternion import Quaternion

    a, b, c, d = rng.standard_normal(4) / np.sqrt(2.0)
    return Quaternion(float(a), float(b), float(c), float(d))


def ginibre_matrix(n: int, kind="complex", rng: RngStream | None = None):
    """An ``n x n`` matrix of i.i.d. standard normal entries.

    Entries are filled row-major.  A complex entry consumes two consecutive
    normals (real part first), a quaternion entry four, so the matrix agrees
    with the same number of scalar draws made one at a time.

    Returns
    -------
    numpy.ndarray or QuaternionArray
        ``float64`` for ``real``, ``complex128`` for ``complex`` and a
        :class:`~haarmat.quaternion.QuaternionArray` for ``quaternion``.
    """
    kind = NormalScalarKind(kind)
    if int(n) < 1:
        raise ValueError(f"invalid dimension n={n}; need n >= 1")
    if rng is None:
        rng = RngStream()
    n = int(n)
    if kind is NormalScalarKind.REAL:
        return rng.standard_normal((n, n))
    if kind is NormalScalarKind.COMPLEX:
        g = rng.standard_normal((n, n, 2)) / np.sqrt(2.0)
        return g[..., 0] + 1j * g[..., 1]
    from .quaternion import QuaternionArray

    return QuaternionArray(rng.standard_normal((n, n, 4)) / np.sqrt(2.0))
