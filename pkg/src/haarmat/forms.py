"""Skew-symmetric forms defining the unitary symplectic group."""
from __future__ import annotations

import enum

import numpy as np

from .quaternion import omega

__all__ = ["SymplecticForm", "j_form", "omega", "shuffle_permutation", "symplectic_form", "to_j_basis"]


class SymplecticForm(str, enum.Enum):
    J_BLOCK = "J_block"
    OMEGA_INTERLEAVED = "Omega_interleaved"


def j_form(n: int) -> np.ndarray:
    """``J = [[0, I_n], [-I_n, 0]]`` of size ``2n``."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_form(n: int, variant=SymplecticForm.J_BLOCK) -> np.ndarray:
    variant = SymplecticForm(variant)
    return j_form(n) if variant is SymplecticForm.J_BLOCK else omega(n)


def shuffle_permutation(n: int) -> np.ndarray:
    """Index map ``p`` with ``J = Omega[p][:, p]``.

    ``p[j] = 2j`` and ``p[n + j] = 2j + 1``: the perfect shuffle that gathers
    the even interleaved coordinates first.
    """
    return np.concatenate([np.arange(0, 2 * n, 2), np.arange(1, 2 * n, 2)])


def to_j_basis(S: np.ndarray) -> np.ndarray:
    """Conjugate a ``2n x 2n`` matrix from the Omega basis to the J basis."""
    S = np.asarray(S)
    p = shuffle_permutation(S.shape[0] // 2)
    return S[np.ix_(p, p)]
