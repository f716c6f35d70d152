"""Haar-distributed samples from the classical compact groups and circular ensembles.

=============== ================================= ==================
kind            output                            construction
=============== ================================= ==================
cue             U(n), Haar                        Ginibre -> raw QR -> phase fix
coe             symmetric unitary ``W W^t``       W from ``cue``
cse             self-dual unitary, ``2n x 2n``    ``-W J W^t J``, W from ``cue(2n)``
orthogonal      O(n), Haar                        real Ginibre -> QR
usp             USp(2n) in the J basis            quaternion Ginibre -> QR -> embed
sp_quaternion   Sp(n) as quaternion matrix        quaternion Ginibre -> QR
cue_wrong       unitary, *not* Haar               raw QR without phase fix
ginibre_*       i.i.d. normal entries             --
=============== ================================= ==================

``orthogonal`` and ``cue`` can alternatively be drawn as products of random
Householder reflections (``algorithm="householder_product"``).
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .forms import j_form, to_j_basis
from .qr import HouseholderStep, QrConvention, SingularMatrixError, householder_step, phase_fix, qr_decompose
from .quaternion import embed_matrix
from .rng import RngStream, ginibre_matrix

__all__ = [
    "Algorithm",
    "EnsembleKind",
    "EnsembleSpec",
    "sample",
    "sample_batch",
    "sample_coe",
    "sample_cse",
    "sample_cue_wrong",
    "sample_haar_orthogonal",
    "sample_haar_sp_quaternion",
    "sample_haar_unitary",
    "sample_haar_usp",
    "sample_orthogonal_householder_product",
    "sample_permutation",
    "sample_sphere",
    "sample_unitary_householder_product",
]

# resampling a Ginibre matrix is only needed on a measure-zero event
_MAX_RESAMPLE = 100


class EnsembleKind(str, enum.Enum):
    CUE = "cue"
    COE = "coe"
    CSE = "cse"
    ORTHOGONAL = "orthogonal"
    USP = "usp"
    SP_QUATERNION = "sp_quaternion"
    GINIBRE_REAL = "ginibre_real"
    GINIBRE_COMPLEX = "ginibre_complex"
    GINIBRE_QUATERNION = "ginibre_quaternion"
    CUE_WRONG = "cue_wrong"


class Algorithm(str, enum.Enum):
    QR = "qr"
    HOUSEHOLDER_PRODUCT = "householder_product"

    @classmethod
    def _missing_(cls, value):
        if value == "householder":
            return cls.HOUSEHOLDER_PRODUCT
        return None


_HOUSEHOLDER_KINDS = {EnsembleKind.ORTHOGONAL, EnsembleKind.CUE}


@dataclass(frozen=True)
class EnsembleSpec:
    """Everything needed to reproduce a sequence of samples.

    Sample ``i`` is drawn from ``RngStream(seed, i)``, so batches can be
    split across workers without changing the output.
    """

    kind: EnsembleKind
    n: int
    seed: int = 0
    algorithm: Algorithm = Algorithm.QR

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind(self.kind))
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if int(self.n) < 1:
            raise ValueError(f"invalid dimension n={self.n}; need n >= 1")
        object.__setattr__(self, "n", int(self.n))
        if self.algorithm is Algorithm.HOUSEHOLDER_PRODUCT and self.kind not in _HOUSEHOLDER_KINDS:
            raise ValueError(f"algorithm 'householder_product' is not available for ensemble '{self.kind.value}'")

    @property
    def matrix_size(self) -> int:
        return 2 * self.n if self.kind in (EnsembleKind.CSE, EnsembleKind.USP) else self.n

    def rng(self, index: int) -> RngStream:
        return RngStream(self.seed, index)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "n": self.n, "seed": self.seed, "algorithm": self.algorithm.value}


def _ginibre_qr(n, kind, rng, convention):
    for _ in range(_MAX_RESAMPLE):
        try:
            return qr_decompose(ginibre_matrix(n, kind, rng), convention)
        except SingularMatrixError:
            continue
    raise RuntimeError("Ginibre matrix singular on every attempt")


def sample_haar_unitary(n: int, rng: RngStream, algorithm=Algorithm.QR) -> np.ndarray:
    """Haar-random ``n x n`` unitary matrix.

    The QR route factors a complex Ginibre matrix with plain reflections and
    then multiplies column ``j`` of ``Q`` by ``r_jj / |r_jj|``.
    """
    if Algorithm(algorithm) is Algorithm.HOUSEHOLDER_PRODUCT:
        return sample_unitary_householder_product(n, rng)
    return phase_fix(_ginibre_qr(n, "complex", rng, QrConvention.RAW)).Q


def sample_haar_orthogonal(n: int, rng: RngStream, algorithm=Algorithm.QR) -> np.ndarray:
    if Algorithm(algorithm) is Algorithm.HOUSEHOLDER_PRODUCT:
        return sample_orthogonal_householder_product(n, rng)
    return _ginibre_qr(n, "real", rng, QrConvention.POSITIVE_DIAGONAL).Q


def sample_haar_sp_quaternion(n: int, rng: RngStream):
    """Haar-random element of Sp(n) as an ``n x n`` quaternion matrix."""
    return _ginibre_qr(n, "quaternion", rng, QrConvention.POSITIVE_DIAGONAL).Q


def sample_haar_usp(n: int, rng: RngStream) -> np.ndarray:
    """Haar-random element of USp(2n) satisfying ``S J S^t = J``."""
    return to_j_basis(embed_matrix(sample_haar_sp_quaternion(n, rng)))


def sample_coe(n: int, rng: RngStream) -> np.ndarray:
    W = sample_haar_unitary(n, rng)
    return W @ W.T


def sample_cse(n: int, rng: RngStream) -> np.ndarray:
    """``2n x 2n`` self-dual unitary matrix ``-W J W^t J`` with W Haar in U(2n)."""
    W = sample_haar_unitary(2 * n, rng)
    J = j_form(n)
    return -(W @ J) @ (W.T @ J)


def sample_cue_wrong(n: int, rng: RngStream) -> np.ndarray:
    """Unitary ``Q`` of a raw QR of a Ginibre matrix, left uncorrected.

    Kept as a negative control: the output is unitary but its eigenvalue
    distribution is visibly not that of the CUE.
    """
    return _ginibre_qr(n, "complex", rng, QrConvention.RAW).Q


def sample_sphere(m: int, rng: RngStream, kind="real") -> np.ndarray:
    """Uniform unit vector in R^m (or C^m for ``kind="complex"``)."""
    if int(m) < 1:
        raise ValueError(f"invalid dimension m={m}; need m >= 1")
    while True:
        if kind == "complex":
            g = rng.standard_normal((m, 2))
            v = g[:, 0] + 1j * g[:, 1]
        else:
            v = rng.standard_normal(m)
        nrm = np.linalg.norm(v)
        if nrm > 0.0:
            return v / nrm


def _reflection_product(n, rng, kind):
    # builds H_n* ... H_1*, each H_m acting on the trailing m coordinates
    dtype = complex if kind == "complex" else float
    M = np.eye(n, dtype=dtype)
    for m in range(1, n + 1):
        step = householder_step(sample_sphere(m, rng, kind))
        adj = HouseholderStep(step.pivot_index, step.u, np.conj(step.leading_factor))
        M[n - m:, :] = adj.apply(M[n - m:, :])
    return M


def sample_orthogonal_householder_product(n: int, rng: RngStream) -> np.ndarray:
    """Haar-random O(n) as ``H_n(v_n) ... H_1(v_1)`` with ``v_m`` uniform on S^(m-1).

    Consumes ``n(n+1)/2`` normal draws, against ``n^2`` for the QR route.
    """
    return _reflection_product(n, rng, "real")


def sample_unitary_householder_product(n: int, rng: RngStream) -> np.ndarray:
    """Haar-random U(n) as a product of complex reflections of random unit vectors."""
    return _reflection_product(n, rng, "complex")


def sample_permutation(n: int, rng: RngStream) -> np.ndarray:
    """Uniform permutation of ``range(n)`` by the subgroup algorithm.

    Step ``m`` multiplies on the left by the transposition ``(m-1, j)`` with
    ``j`` uniform in ``range(m)``, a uniform representative of S_m / S_(m-1).
    Returns ``p`` with ``p[i]`` the image of ``i``.
    """
    if int(n) < 1:
        raise ValueError(f"invalid dimension n={n}; need n >= 1")
    p = np.arange(n)
    for m in range(2, n + 1):
        j = rng.integers(0, m)
        a, b = p == m - 1, p == j
        p[a], p[b] = j, m - 1
    return p


_DISPATCH = {
    EnsembleKind.CUE: lambda s, r: sample_haar_unitary(s.n, r, s.algorithm),
    EnsembleKind.COE: lambda s, r: sample_coe(s.n, r),
    EnsembleKind.CSE: lambda s, r: sample_cse(s.n, r),
    EnsembleKind.ORTHOGONAL: lambda s, r: sample_haar_orthogonal(s.n, r, s.algorithm),
    EnsembleKind.USP: lambda s, r: sample_haar_usp(s.n, r),
    EnsembleKind.SP_QUATERNION: lambda s, r: sample_haar_sp_quaternion(s.n, r),
    EnsembleKind.GINIBRE_REAL: lambda s, r: ginibre_matrix(s.n, "real", r),
    EnsembleKind.GINIBRE_COMPLEX: lambda s, r: ginibre_matrix(s.n, "complex", r),
    EnsembleKind.GINIBRE_QUATERNION: lambda s, r: ginibre_matrix(s.n, "quaternion", r),
    EnsembleKind.CUE_WRONG: lambda s, r: sample_cue_wrong(s.n, r),
}


def sample(spec: EnsembleSpec, index: int = 0):
    """Sample number ``index`` of the sequence defined by ``spec``."""
    return _DISPATCH[spec.kind](spec, spec.rng(index))


def sample_batch(spec: EnsembleSpec, count: int, start: int = 0, threads: int = 1, func=None):
    """Samples ``start, ..., start + count - 1`` in index order.

    ``func``, if given, is applied to each sample inside the worker (for
    example to reduce a matrix to its eigenphases).  Results do not depend
    on ``threads``.
    """
    def work(i):
        x = sample(spec, i)
        return func(x) if func is not None else x

    idx = range(start, start + count)
    if threads <= 1:
        return [work(i) for i in idx]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, idx))
