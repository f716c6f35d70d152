"""Hamilton quaternions and quaternion matrices.

A quaternion ``q = a + b i1 + c i2 + d i3`` is stored as four reals.  Arrays
of quaternions are numpy arrays whose last axis has length 4.

The complex representation maps ``q`` to the 2x2 block::

    [[ a + ib,  c + id],
     [-c + id,  a - ib]]

and an ``n x n`` quaternion matrix to the ``2n x 2n`` complex matrix whose
``(j, k)`` block is the image of entry ``(j, k)``.  In that layout the unit
``i2`` times the identity becomes ``Omega = I (x) [[0, 1], [-1, 0]]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Quaternion",
    "QuaternionArray",
    "embed_matrix",
    "embed_scalar",
    "hamilton",
    "omega",
    "q_mul",
    "qconj",
    "qm_conj_transpose",
    "qm_mul",
    "unembed_matrix",
]

# (i, j) -> (k, sign) with e_i e_j = sign * e_k, basis (1, i1, i2, i3)
_TABLE = {
    (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
    (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
    (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
    (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
}

_CONJ_SIGN = np.array([1.0, -1.0, -1.0, -1.0])


def hamilton(p, q):
    """Elementwise Hamilton product of two broadcastable ``(..., 4)`` arrays."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


def qconj(q):
    """Quaternion conjugate of a ``(..., 4)`` array."""
    return np.asarray(q, dtype=float) * _CONJ_SIGN


@dataclass(frozen=True)
class Quaternion:
    """Immutable quaternion ``a + b i1 + c i2 + d i3``."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    @classmethod
    def from_array(cls, x) -> "Quaternion":
        a, b, c, d = (float(v) for v in np.asarray(x, dtype=float).reshape(4))
        return cls(a, b, c, d)

    def to_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    def conj(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self) -> float:
        return self.a**2 + self.b**2 + self.c**2 + self.d**2

    def norm(self) -> float:
        return float(np.sqrt(self.norm2()))

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return self.conj() * (1.0 / n2)

    def __add__(self, other):
        other = _as_quaternion(other)
        return Quaternion(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        return self + (-_as_quaternion(other))

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            s = float(other)
            return Quaternion(self.a * s, self.b * s, self.c * s, self.d * s)
        if isinstance(other, Quaternion):
            return q_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * other
        return NotImplemented

    def isclose(self, other, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.to_array(), _as_quaternion(other).to_array(), rtol=0, atol=atol))


def _as_quaternion(x) -> Quaternion:
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return Quaternion(float(x))
    raise TypeError(f"cannot interpret {type(x).__name__} as a quaternion")


ONE = Quaternion(1.0)
I1 = Quaternion(0.0, 1.0)
I2 = Quaternion(0.0, 0.0, 1.0)
I3 = Quaternion(0.0, 0.0, 0.0, 1.0)


def q_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``; not commutative."""
    return Quaternion.from_array(hamilton(p.to_array(), q.to_array()))


class QuaternionArray:
    """A dense vector or matrix of quaternions.

    Parameters
    ----------
    coeffs : array_like, shape (..., 4)
        Real coefficients of ``1, i1, i2, i3`` in the last axis.
    """

    __array_priority__ = 20

    def __init__(self, coeffs):
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.ndim < 1 or coeffs.shape[-1] != 4:
            raise ValueError(f"quaternion coefficients need a trailing axis of length 4, got {coeffs.shape}")
        coeffs.setflags(write=False)
        self.coeffs = coeffs

    @classmethod
    def identity(cls, n: int) -> "QuaternionArray":
        c = np.zeros((n, n, 4))
        c[np.arange(n), np.arange(n), 0] = 1.0
        return cls(c)

    @classmethod
    def diag(cls, entries) -> "QuaternionArray":
        entries = [e.to_array() if isinstance(e, Quaternion) else np.asarray(e, float) for e in entries]
        n = len(entries)
        c = np.zeros((n, n, 4))
        for j, e in enumerate(entries):
            c[j, j] = e
        return cls(c)

    @classmethod
    def from_components(cls, q0, q1, q2, q3) -> "QuaternionArray":
        """Build from the real coefficient matrices of ``1, i1, i2, i3``."""
        return cls(np.stack([q0, q1, q2, q3], axis=-1))

    @property
    def shape(self):
        return self.coeffs.shape[:-1]

    @property
    def ndim(self):
        return self.coeffs.ndim - 1

    def __len__(self):
        return self.shape[0]

    def __getitem__(self, idx):
        c = self.coeffs[idx]
        if c.ndim == 1:
            return Quaternion.from_array(c)
        return QuaternionArray(c)

    def __repr__(self):
        return f"QuaternionArray(shape={self.shape})"

    def __eq__(self, other):
        if not isinstance(other, QuaternionArray):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(np.array_equal(self.coeffs, other.coeffs))

    __hash__ = None

    def __add__(self, other):
        return QuaternionArray(self.coeffs + _coeffs(other))

    def __sub__(self, other):
        return QuaternionArray(self.coeffs - _coeffs(other))

    def __neg__(self):
        return QuaternionArray(-self.coeffs)

    def __matmul__(self, other):
        return qm_mul(self, other)

    def conj(self) -> "QuaternionArray":
        """Entrywise quaternion conjugate."""
        return QuaternionArray(qconj(self.coeffs))

    def conj_transpose(self) -> "QuaternionArray":
        return qm_conj_transpose(self)

    @property
    def H(self):
        return qm_conj_transpose(self)

    def norm2(self) -> np.ndarray:
        """Entrywise squared norms."""
        return np.sum(self.coeffs**2, axis=-1)

    def frobenius_norm(self) -> float:
        return float(np.sqrt(np.sum(self.coeffs**2)))

    def embed(self) -> np.ndarray:
        return embed_matrix(self)

    def left_scale(self, q) -> "QuaternionArray":
        """Multiply every entry by the quaternion ``q`` from the left."""
        return QuaternionArray(hamilton(_coeffs(q), self.coeffs))

    def right_scale(self, q) -> "QuaternionArray":
        return QuaternionArray(hamilton(self.coeffs, _coeffs(q)))

    def copy(self) -> "QuaternionArray":
        return QuaternionArray(self.coeffs.copy())


def _coeffs(x) -> np.ndarray:
    if isinstance(x, QuaternionArray):
        return x.coeffs
    if isinstance(x, Quaternion):
        return x.to_array()
    return np.asarray(x, dtype=float)


def _matmul_coeffs(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # 16 real matmuls, one per pair of basis units
    parts = [0.0] * 4
    for (i, j), (k, s) in _TABLE.items():
        parts[k] = parts[k] + s * (p[..., i] @ q[..., j])
    return np.stack(parts, axis=-1)


def qm_mul(P: QuaternionArray, Q: QuaternionArray) -> QuaternionArray:
    """Matrix product of quaternion matrices, or matrix times vector.

    Entry ``(j, l)`` is ``sum_k P[j, k] Q[k, l]`` with each product taken in
    that order.
    """
    p, q = _coeffs(P), _coeffs(Q)
    if p.ndim != 3 or q.ndim not in (2, 3):
        raise ValueError("qm_mul needs a quaternion matrix on the left and a matrix or vector on the right")
    if p.shape[1] != q.shape[0]:
        raise ValueError(f"dimension mismatch: {p.shape[:-1]} @ {q.shape[:-1]}")
    return QuaternionArray(_matmul_coeffs(p, q))


def qm_conj_transpose(Q: QuaternionArray) -> QuaternionArray:
    """Conjugate transpose: ``(Q*)[j, k] = conj(Q[k, j])``."""
    c = _coeffs(Q)
    if c.ndim != 3:
        raise ValueError("conjugate transpose needs a quaternion matrix")
    return QuaternionArray(qconj(np.swapaxes(c, 0, 1)))


def embed_scalar(q) -> np.ndarray:
    """The 2x2 complex matrix ``[[z, w], [-conj(w), conj(z)]]`` of ``q``."""
    a, b, c, d = _coeffs(q)
    z, w = complex(a, b), complex(c, d)
    return np.array([[z, w], [-w.conjugate(), z.conjugate()]])


def embed_matrix(Q) -> np.ndarray:
    """Complex ``2n x 2m`` representation of an ``n x m`` quaternion matrix."""
    c = _coeffs(Q)
    if c.ndim != 3:
        raise ValueError("embed_matrix needs a quaternion matrix")
    n, m = c.shape[:2]
    z = c[..., 0] + 1j * c[..., 1]
    w = c[..., 2] + 1j * c[..., 3]
    out = np.empty((n, 2, m, 2), dtype=complex)
    out[:, 0, :, 0] = z
    out[:, 0, :, 1] = w
    out[:, 1, :, 0] = -w.conj()
    out[:, 1, :, 1] = z.conj()
    return out.reshape(2 * n, 2 * m)


def unembed_matrix(A, atol: float = 1e-10) -> QuaternionArray:
    """Inverse of :func:`embed_matrix`.

    Raises ``ValueError`` if ``A`` is not the image of a quaternion matrix,
    i.e. its 2x2 blocks do not have the ``[[z, w], [-conj(w), conj(z)]]``
    structure to within ``atol``.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] % 2 or A.shape[1] % 2:
        raise ValueError(f"need an even-dimensional matrix, got shape {A.shape}")
    n, m = A.shape[0] // 2, A.shape[1] // 2
    blocks = A.reshape(n, 2, m, 2)
    z = blocks[:, 0, :, 0]
    w = blocks[:, 0, :, 1]
    err = max(
        np.max(np.abs(blocks[:, 1, :, 1] - z.conj()), initial=0.0),
        np.max(np.abs(blocks[:, 1, :, 0] + w.conj()), initial=0.0),
    )
    if err > atol:
        raise ValueError(f"matrix is not a quaternion representation (block residual {err:.3g})")
    return QuaternionArray(np.stack([z.real, z.imag, w.real, w.imag], axis=-1))


def omega(n: int) -> np.ndarray:
    """The interleaved skew form ``I_n (x) [[0, 1], [-1, 0]]``."""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
