"""Entrywise (max-norm) residuals of the identities defining each matrix group."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .forms import j_form, omega
from .quaternion import QuaternionArray, embed_matrix

__all__ = ["ENSEMBLE_PROPERTIES", "MatrixProperty", "ResidualReport", "check", "check_ensemble", "residual"]


class MatrixProperty(str, enum.Enum):
    UNITARITY = "unitarity"
    ORTHOGONALITY = "orthogonality"
    SYMPLECTIC_J = "symplectic_J"
    SYMPLECTIC_OMEGA = "symplectic_Omega"
    SYMMETRY = "symmetry"
    SELF_DUALITY = "self_duality"
    DETERMINANT_MODULUS = "determinant_modulus"


@dataclass(frozen=True)
class ResidualReport:
    property: MatrixProperty
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "property": self.property.value,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _maxabs(A) -> float:
    return float(np.max(np.abs(A), initial=0.0))


def _half(n2: int, prop) -> int:
    if n2 % 2:
        raise ValueError(f"{prop.value} needs an even dimension, got {n2}")
    return n2 // 2


def residual(M, prop) -> float:
    """Max-norm residual of ``prop`` for the square matrix ``M``.

    Quaternion matrices are checked through their complex representation.
    """
    prop = MatrixProperty(prop)
    if isinstance(M, QuaternionArray):
        M = embed_matrix(M)
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"need a square matrix, got shape {M.shape}")
    n = M.shape[0]
    eye = np.eye(n)
    if prop is MatrixProperty.UNITARITY:
        Mh = M.conj().T
        return max(_maxabs(Mh @ M - eye), _maxabs(M @ Mh - eye))
    if prop is MatrixProperty.ORTHOGONALITY:
        return max(_maxabs(M.T @ M - eye), _maxabs(M @ M.T - eye), _maxabs(np.imag(M)))
    if prop is MatrixProperty.SYMPLECTIC_J:
        J = j_form(_half(n, prop))
        return _maxabs(M @ J @ M.T - J)
    if prop is MatrixProperty.SYMPLECTIC_OMEGA:
        W = omega(_half(n, prop))
        return _maxabs(M @ W @ M.T - W)
    if prop is MatrixProperty.SYMMETRY:
        return _maxabs(M - M.T)
    if prop is MatrixProperty.SELF_DUALITY:
        J = j_form(_half(n, prop))
        return _maxabs(M + J @ M.T @ J)
    return float(abs(abs(np.linalg.det(M)) - 1.0))


def check(M, prop, tolerance: float = 1e-10) -> ResidualReport:
    prop = MatrixProperty(prop)
    return ResidualReport(prop, residual(M, prop), float(tolerance))


P = MatrixProperty
ENSEMBLE_PROPERTIES = {
    "cue": (P.UNITARITY, P.DETERMINANT_MODULUS),
    "cue_wrong": (P.UNITARITY, P.DETERMINANT_MODULUS),
    "coe": (P.UNITARITY, P.SYMMETRY),
    "cse": (P.UNITARITY, P.SELF_DUALITY),
    "orthogonal": (P.ORTHOGONALITY, P.DETERMINANT_MODULUS),
    "usp": (P.UNITARITY, P.SYMPLECTIC_J),
    "sp_quaternion": (P.UNITARITY, P.SYMPLECTIC_OMEGA),
    "ginibre_real": (),
    "ginibre_complex": (),
    "ginibre_quaternion": (),
}
del P


def check_ensemble(M, kind, tolerance: float = 1e-10) -> list[ResidualReport]:
    """Reports for every membership property advertised by ensemble ``kind``."""
    kind = getattr(kind, "value", kind)
    return [check(M, p, tolerance) for p in ENSEMBLE_PROPERTIES[kind]]
