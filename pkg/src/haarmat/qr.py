"""Householder QR over the reals, complexes and quaternions.

Two conventions for the diagonal of ``R`` are supported.

``positive_diagonal``
    Every reflection carries a unit prefactor (``-sgn(x1)``, ``-exp(-i theta)``
    or ``-conj(q)``) that sends the pivot column to ``||v|| e1``.  The diagonal
    of ``R`` is then real and strictly positive, which makes the factorisation
    unique and equivariant: ``U Z`` factors as ``(U Q, R)``.

``raw``
    Plain reflections ``I - 2 u u*``, as in the usual library routines.  The
    pivot lands on ``-phase(x1) ||v|| e1``, so the phases on the diagonal of
    ``R`` depend on the input.  :func:`phase_fix` repairs this afterwards.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .quaternion import Quaternion, QuaternionArray, hamilton, qconj, qm_conj_transpose

__all__ = [
    "HouseholderStep",
    "QrConvention",
    "QrFactors",
    "SingularMatrixError",
    "householder_step",
    "phase_fix",
    "qr_decompose",
]


class QrConvention(str, enum.Enum):
    POSITIVE_DIAGONAL = "positive_diagonal"
    RAW = "raw"


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a pivot is numerically zero.

    Attributes
    ----------
    index : int
        Zero-based column at which the factorisation broke down.
    """

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"matrix is numerically singular at column {index}")


@dataclass(frozen=True)
class QrFactors:
    """``Z = Q R`` with ``Q`` unitary (or orthogonal, or symplectic).

    ``flops`` counts the scalar multiply-adds spent on reflections; it is
    zero for factors that were not produced by :func:`qr_decompose`.
    """

    Q: object
    R: object
    convention: QrConvention
    flops: int = 0

    def __iter__(self):
        yield self.Q
        yield self.R


@dataclass(frozen=True)
class HouseholderStep:
    """One reflection ``H = leading_factor * (I - 2 u u*)`` of size ``m``.

    For quaternions the leading factor multiplies from the left.
    """

    pivot_index: int
    u: object
    leading_factor: object

    def apply(self, x):
        """Apply the reflection to a vector or to the columns of a matrix."""
        if isinstance(self.u, QuaternionArray):
            u = self.u.coeffs
            xc = x.coeffs if isinstance(x, QuaternionArray) else np.asarray(x, float)
            vec = xc.ndim == 2
            if vec:
                xc = xc[:, None, :]
            w = hamilton(qconj(u)[:, None, :], xc).sum(axis=0)
            y = xc - 2.0 * hamilton(u[:, None, :], w[None, :, :])
            y = hamilton(_quat_coeffs(self.leading_factor), y)
            return QuaternionArray(y[:, 0, :] if vec else y)
        x = np.asarray(x)
        u = self.u
        if x.ndim == 1:
            y = x - 2.0 * u * np.vdot(u, x)
        else:
            y = x - 2.0 * np.outer(u, u.conj() @ x)
        return self.leading_factor * y

    def matrix(self):
        """The dense ``m x m`` reflection."""
        m = self.pivot_index
        if isinstance(self.u, QuaternionArray):
            return self.apply(QuaternionArray.identity(m))
        dtype = np.result_type(self.u, self.leading_factor)
        return self.apply(np.eye(m, dtype=dtype))


def _quat_coeffs(q):
    return q.to_array() if isinstance(q, Quaternion) else np.asarray(q, float)


def _unit_phase(x1):
    # sgn(0) = +1 and the phase of a zero pivot is 1
    a = abs(x1)
    return x1 / a if a > 0 else np.ones_like(x1)


def householder_step(v, convention=QrConvention.POSITIVE_DIAGONAL) -> HouseholderStep:
    """Reflection taking ``v`` to ``||v|| e1`` (or to ``-phase ||v|| e1`` if raw).

    Parameters
    ----------
    v : array_like or QuaternionArray
        A non-zero real, complex or quaternion vector.
    convention : QrConvention or str
        ``positive_diagonal`` includes the unit prefactor; ``raw`` omits it.

    Raises
    ------
    ValueError
        If ``v`` is the zero vector.
    """
    convention = QrConvention(convention)
    if isinstance(v, QuaternionArray):
        x = v.coeffs
        if x.ndim != 2:
            raise ValueError("householder_step needs a quaternion vector")
        nrm = np.sqrt(np.sum(x * x))
        if nrm == 0.0:
            raise ValueError("cannot build a reflection from the zero vector")
        a1 = np.sqrt(np.sum(x[0] ** 2))
        q = x[0] / a1 if a1 > 0 else np.array([1.0, 0.0, 0.0, 0.0])
        u = x / nrm
        u[0] = u[0] + q
        u = u / np.sqrt(np.sum(u * u))
        lead = -Quaternion.from_array(qconj(q)) if convention is QrConvention.POSITIVE_DIAGONAL else Quaternion(1.0)
        return HouseholderStep(len(x), QuaternionArray(u), lead)

    x = np.asarray(v)
    if not np.iscomplexobj(x):
        x = x.astype(float)
    if x.ndim != 1:
        raise ValueError("householder_step needs a vector")
    nrm = np.linalg.norm(x)
    if nrm == 0.0:
        raise ValueError("cannot build a reflection from the zero vector")
    phase = _unit_phase(x[0])
    u = x / nrm
    u[0] += phase
    u /= np.linalg.norm(u)
    if convention is QrConvention.POSITIVE_DIAGONAL:
        lead = -np.conj(phase)
    else:
        lead = np.ones_like(phase)
    return HouseholderStep(len(x), u, lead.item())


def qr_decompose(Z, convention=QrConvention.POSITIVE_DIAGONAL) -> QrFactors:
    """Householder QR of a square real, complex or quaternion matrix.

    ``Q`` is assembled explicitly, at a cost of O(n^3) operations.  Entries
    of ``R`` below the diagonal are exact zeros.

    Raises
    ------
    SingularMatrixError
        If some ``|r_jj| < n * eps * ||Z||_F``.
    """
    convention = QrConvention(convention)
    if isinstance(Z, QuaternionArray):
        return _qr_quaternion(Z, convention)
    Z = np.asarray(Z)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise ValueError(f"qr_decompose needs a square matrix, got shape {Z.shape}")
    return _qr_dense(Z, convention)


def _threshold(n, fro, dtype):
    return n * np.finfo(dtype).eps * fro


def _qr_dense(Z, convention):
    n = Z.shape[0]
    dtype = np.complex128 if np.iscomplexobj(Z) else np.float64
    positive = convention is QrConvention.POSITIVE_DIAGONAL
    # reflections act on [Z | I]; the right block accumulates Q*
    B = np.zeros((n, 2 * n), dtype=dtype)
    B[:, :n] = Z
    B[:, n:] = np.eye(n)
    tol = _threshold(n, np.linalg.norm(Z), np.float64)
    diag = np.empty(n, dtype=dtype)
    flops = 0
    for j in range(n):
        x = B[j:, j]
        nrm = np.linalg.norm(x)
        if nrm <= tol or nrm == 0.0:
            raise SingularMatrixError(j)
        phase = _unit_phase(x[0])
        u = x / nrm
        u[0] += phase
        u /= np.linalg.norm(u)
        sub = B[j:, j + 1:]
        sub -= 2.0 * np.outer(u, u.conj() @ sub)
        flops += 2 * sub.size
        if positive:
            sub *= -np.conj(phase)
            flops += sub.size
            diag[j] = nrm
        else:
            diag[j] = -phase * nrm
    R = np.triu(B[:, :n])
    R[np.diag_indices(n)] = diag
    Q = B[:, n:].conj().T.copy()
    return QrFactors(Q, R, convention, flops)


def _qr_quaternion(Z: QuaternionArray, convention):
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise ValueError(f"qr_decompose needs a square matrix, got shape {Z.shape}")
    n = Z.shape[0]
    positive = convention is QrConvention.POSITIVE_DIAGONAL
    B = np.zeros((n, 2 * n, 4))
    B[:, :n] = Z.coeffs
    B[np.arange(n), n + np.arange(n), 0] = 1.0
    tol = _threshold(n, Z.frobenius_norm(), np.float64)
    diag = np.zeros((n, 4))
    flops = 0
    for j in range(n):
        x = B[j:, j]
        nrm = np.sqrt(np.sum(x * x))
        if nrm <= tol or nrm == 0.0:
            raise SingularMatrixError(j)
        a1 = np.sqrt(np.sum(x[0] ** 2))
        q = x[0] / a1 if a1 > 0 else np.array([1.0, 0.0, 0.0, 0.0])
        u = x / nrm
        u[0] = u[0] + q
        u /= np.sqrt(np.sum(u * u))
        sub = B[j:, j + 1:]
        w = hamilton(qconj(u)[:, None, :], sub).sum(axis=0)
        sub -= 2.0 * hamilton(u[:, None, :], w[None, :, :])
        flops += 2 * sub.shape[0] * sub.shape[1]
        if positive:
            sub[...] = hamilton(-qconj(q), sub)
            flops += sub.shape[0] * sub.shape[1]
            diag[j, 0] = nrm
        else:
            diag[j] = -q * nrm
    R = B[:, :n].copy()
    R[np.tril_indices(n, -1)] = 0.0
    R[np.arange(n), np.arange(n)] = diag
    Q = qm_conj_transpose(QuaternionArray(B[:, n:]))
    return QrFactors(Q, QuaternionArray(R), convention, flops)


def phase_fix(f: QrFactors) -> QrFactors:
    """Move the phases of ``diag(R)`` into ``Q``.

    With ``L = diag(r_jj / |r_jj|)`` this returns ``Q L`` and ``L^-1 R``,
    whose diagonal is real and positive.  The product ``Q R`` is unchanged.

    Raises
    ------
    SingularMatrixError
        If some ``r_jj`` is exactly zero.
    """
    Q, R = f.Q, f.R
    if isinstance(R, QuaternionArray):
        n = R.shape[0]
        d = R.coeffs[np.arange(n), np.arange(n)]
        mod = np.sqrt(np.sum(d * d, axis=-1))
        if np.any(mod == 0.0):
            raise SingularMatrixError(int(np.argmin(mod)), "zero on the diagonal of R")
        lam = d / mod[:, None]
        Qc = hamilton(Q.coeffs, lam[None, :, :])
        Rc = hamilton(qconj(lam)[:, None, :], R.coeffs)
        Rc[np.tril_indices(n, -1)] = 0.0
        Rc[np.arange(n), np.arange(n)] = 0.0
        Rc[np.arange(n), np.arange(n), 0] = mod
        return replace(f, Q=QuaternionArray(Qc), R=QuaternionArray(Rc), convention=QrConvention.POSITIVE_DIAGONAL)

    R = np.asarray(R)
    d = np.diagonal(R)
    mod = np.abs(d)
    if np.any(mod == 0.0):
        raise SingularMatrixError(int(np.argmin(mod)), "zero on the diagonal of R")
    # componentwise so that a positive diagonal gives exactly L = I
    lam = d.real / mod + 1j * (d.imag / mod) if np.iscomplexobj(d) else d / mod
    Q2 = np.asarray(Q) * lam
    R2 = np.triu(lam.conj()[:, None] * R)
    R2[np.diag_indices(len(d))] = mod
    return replace(f, Q=Q2, R=R2, convention=QrConvention.POSITIVE_DIAGONAL)
