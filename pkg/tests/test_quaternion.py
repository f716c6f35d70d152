import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_quaternion_matrix
from haarmat.quaternion import (
    I1,
    I2,
    I3,
    ONE,
    Quaternion,
    QuaternionArray,
    embed_matrix,
    embed_scalar,
    omega,
    q_mul,
    qm_conj_transpose,
    qm_mul,
    unembed_matrix,
)

coef = st.floats(-10, 10, allow_nan=False)
quats = st.builds(Quaternion, coef, coef, coef, coef)


def test_unit_algebra():
    assert q_mul(I1, I2) == I3
    assert q_mul(I2, I3) == I1
    assert q_mul(I3, I1) == I2
    assert q_mul(I2, I1) == -I3
    for u in (I1, I2, I3):
        assert q_mul(u, u) == -ONE
    assert q_mul(q_mul(I1, I2), I3) == -ONE


@given(quats)
def test_norm_from_conjugate(q):
    n2 = q.norm2()
    for prod in (q * q.conj(), q.conj() * q):
        assert prod.isclose(Quaternion(n2), atol=1e-9 * max(1.0, n2))


@given(quats)
def test_identity_and_involution(q):
    assert ONE * q == q
    assert q.conj().conj() == q


@given(quats, quats)
def test_norm_multiplicative(p, q):
    assert abs((p * q).norm() - p.norm() * q.norm()) <= 1e-12 * max(1.0, p.norm() * q.norm())


def test_embed_units():
    assert np.array_equal(embed_scalar(ONE), np.eye(2))
    assert np.array_equal(embed_scalar(I1), np.array([[1j, 0], [0, -1j]]))
    assert np.array_equal(embed_scalar(I2), np.array([[0, 1], [-1, 0]]))
    assert np.array_equal(embed_scalar(I3), np.array([[0, 1j], [1j, 0]]))


@given(quats)
def test_embed_conjugate(q):
    assert np.allclose(embed_scalar(q.conj()), embed_scalar(q).conj().T, rtol=0, atol=0)


@given(quats, quats)
def test_embed_scalar_multiplicative(p, q):
    lhs = embed_scalar(p * q)
    rhs = embed_scalar(p) @ embed_scalar(q)
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-10 * max(1.0, p.norm() * q.norm()))


def test_embed_identity_matrix():
    assert np.array_equal(embed_matrix(QuaternionArray.identity(2)), np.eye(4))


def test_embed_diag_i2():
    assert np.array_equal(embed_matrix(QuaternionArray.diag([I2])), np.array([[0, 1], [-1, 0]]))


def test_omega_identity():
    n = 4
    M = QuaternionArray.identity(n).right_scale(I2)
    assert np.array_equal(embed_matrix(M), omega(n))
    assert np.array_equal(omega(n), np.kron(np.eye(n), np.array([[0, 1], [-1, 0]])))


def test_kronecker_form():
    gen = np.random.default_rng(1)
    Q = random_quaternion_matrix(gen, 3)
    c = Q.coeffs
    e = [np.eye(2), np.array([[1j, 0], [0, -1j]]), np.array([[0, 1], [-1, 0]]), np.array([[0, 1j], [1j, 0]])]
    kron = sum(np.kron(c[..., k], e[k]) for k in range(4))
    assert np.allclose(embed_matrix(Q), kron, rtol=0, atol=1e-15)


@pytest.mark.parametrize("n", [3, 4])
def test_embed_is_star_homomorphism(n):
    gen = np.random.default_rng(n)
    for _ in range(20):
        P, Q = random_quaternion_matrix(gen, n), random_quaternion_matrix(gen, n)
        EP, EQ = embed_matrix(P), embed_matrix(Q)
        assert np.max(np.abs(embed_matrix(P + Q) - (EP + EQ))) < 1e-12
        assert np.max(np.abs(embed_matrix(qm_mul(P, Q)) - EP @ EQ)) < 1e-12
        assert np.max(np.abs(embed_matrix(qm_conj_transpose(P)) - EP.conj().T)) < 1e-12


def test_qm_mul_identity_and_scalar_case():
    gen = np.random.default_rng(2)
    P = random_quaternion_matrix(gen, 3)
    assert np.allclose((P @ QuaternionArray.identity(3)).coeffs, P.coeffs, rtol=0, atol=1e-15)
    p, q = random_quaternion_matrix(gen, 1), random_quaternion_matrix(gen, 1)
    assert (p @ q)[0, 0].isclose(q_mul(p[0, 0], q[0, 0]), atol=1e-15)


def test_qm_mul_is_not_commutative():
    a = QuaternionArray.diag([I1])
    b = QuaternionArray.diag([I2])
    assert (a @ b)[0, 0] == I3
    assert (b @ a)[0, 0] == -I3


def test_qm_mul_dimension_mismatch():
    gen = np.random.default_rng(3)
    with pytest.raises(ValueError, match="mismatch"):
        qm_mul(random_quaternion_matrix(gen, 2), random_quaternion_matrix(gen, 3))


def test_matrix_vector_product():
    gen = np.random.default_rng(4)
    P = random_quaternion_matrix(gen, 3)
    v = QuaternionArray(gen.standard_normal((3, 4)))
    col = QuaternionArray(v.coeffs[:, None, :])
    assert np.allclose((P @ v).coeffs, (P @ col).coeffs[:, 0], rtol=0, atol=1e-14)


def test_conj_transpose():
    gen = np.random.default_rng(5)
    Q = random_quaternion_matrix(gen, 3)
    assert qm_conj_transpose(qm_conj_transpose(Q)) == Q
    assert Q.H[0, 2] == Q[2, 0].conj()
    assert qm_conj_transpose(QuaternionArray.diag([I3])) == QuaternionArray.diag([-I3])


def test_unembed_round_trip_and_rejection():
    gen = np.random.default_rng(6)
    Q = random_quaternion_matrix(gen, 4)
    assert np.allclose(unembed_matrix(embed_matrix(Q)).coeffs, Q.coeffs, rtol=0, atol=1e-15)
    with pytest.raises(ValueError, match="not a quaternion"):
        unembed_matrix(np.arange(16.0).reshape(4, 4))


def test_arrays_are_immutable():
    Q = QuaternionArray.identity(2)
    with pytest.raises(ValueError):
        Q.coeffs[0, 0, 0] = 5.0
