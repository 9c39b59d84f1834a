import numpy as np
import pytest

from cpseq.su2 import (
    IDENTITY2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    eig_unitary,
    fidelity,
    is_hermitian_traceless,
    log_rotation,
    pauli_generator,
    rotation,
    rotation_generator,
    generator_vector,
)

from conftest import frob, random_su2


def test_pauli_generator_definition():
    assert frob(pauli_generator(3), np.diag([0.5, -0.5])) < 1e-15
    assert frob(pauli_generator(1), SIGMA_X / 2) < 1e-15


def test_pauli_orthogonality_and_normalisation():
    t1, t2 = pauli_generator(1), pauli_generator(2)
    assert abs(np.trace(t1 @ t2)) < 1e-15
    assert abs(np.trace(t1 @ t1) - 0.5) < 1e-15


@pytest.mark.parametrize("bad", [0, 4, -1])
def test_pauli_generator_rejects_bad_index(bad):
    with pytest.raises(ValueError):
        pauli_generator(bad)


def test_rotation_identity():
    assert frob(rotation([0, 0, 0]), IDENTITY2) == 0.0


def test_rotation_pi_about_x():
    assert frob(rotation([np.pi, 0, 0]), -1j * SIGMA_X) < 1e-15


def test_rotation_two_pi_is_minus_identity():
    assert frob(rotation([0, 0, 2 * np.pi]), -IDENTITY2) < 1e-15


def test_rotation_group_property():
    rng = np.random.default_rng(2)
    for _ in range(50):
        U = rotation(rng.normal(size=3)) @ rotation(rng.normal(size=3))
        assert frob(U.conj().T @ U, IDENTITY2) < 1e-12
        assert abs(np.linalg.det(U) - 1) < 1e-12


def test_rotation_commuting_composition():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a, b = rng.uniform(-2 * np.pi, 2 * np.pi, size=2)
        lhs = rotation([a, 0, 0]) @ rotation([b, 0, 0])
        assert frob(lhs, rotation([a + b, 0, 0])) < 1e-12


def test_rotation_generator_roundtrip():
    rng = np.random.default_rng(4)
    m = rng.normal(size=3)
    H = rotation_generator(m)
    assert is_hermitian_traceless(H)
    assert np.allclose(generator_vector(H), m, atol=1e-14)


def test_log_rotation_identity_and_pi_pulse():
    assert np.allclose(log_rotation(IDENTITY2), 0.0)
    assert np.allclose(log_rotation(-1j * SIGMA_X), [np.pi, 0, 0], atol=1e-12)


def test_log_rotation_minus_identity_convention():
    assert np.allclose(log_rotation(-IDENTITY2), [0, 0, 2 * np.pi])


def test_log_rotation_roundtrip_100_random():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = rng.normal(size=3)
        m = n / np.linalg.norm(n) * rng.uniform(0.05, 2 * np.pi - 0.05)
        back = log_rotation(rotation(m))
        assert np.max(np.abs(back - m)) < 1e-9
        assert fidelity(rotation(back), rotation(m)) > 1 - 1e-10


def test_log_rotation_rejects_non_unitary():
    with pytest.raises(ValueError):
        log_rotation(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_fidelity_self_and_global_phase():
    rng = np.random.default_rng(6)
    U = random_su2(rng)
    assert abs(fidelity(U, U) - 1) < 1e-14
    for _ in range(10):
        alpha = rng.uniform(0, 2 * np.pi)
        assert abs(fidelity(U, np.exp(1j * alpha) * U) - 1) < 1e-12


def test_fidelity_examples():
    assert abs(fidelity(IDENTITY2, -IDENTITY2) - 1) < 1e-15
    assert fidelity(IDENTITY2, rotation([np.pi, 0, 0])) < 1e-15


def test_eig_unitary_diagonal_example():
    U = np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)])
    (g0, v0), (g1, v1) = eig_unitary(U)
    assert abs(g0 + np.pi / 4) < 1e-14 and abs(g1 - np.pi / 4) < 1e-14
    assert abs(abs(v0 @ np.array([0, 1])) - 1) < 1e-12
    assert abs(abs(v1 @ np.array([1, 0])) - 1) < 1e-12


def test_eig_unitary_pi_pulse():
    (g0, v0), (g1, v1) = eig_unitary(-1j * SIGMA_X)
    assert abs(g0 + np.pi / 2) < 1e-14 and abs(g1 - np.pi / 2) < 1e-14
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    assert abs(abs(np.vdot(plus, v0)) - 1) < 1e-12
    assert abs(abs(np.vdot(minus, v1)) - 1) < 1e-12
    # eigen-relation and orthonormality
    U = -1j * SIGMA_X
    assert np.linalg.norm(U @ v0 - np.exp(1j * g0) * v0) < 1e-12
    assert abs(np.vdot(v0, v1)) < 1e-12


def test_eig_unitary_degenerate_convention():
    pairs = eig_unitary(IDENTITY2)
    assert pairs[0][0] == 0.0 and pairs[1][0] == 0.0
    assert np.allclose(pairs[0][1], [1, 0]) and np.allclose(pairs[1][1], [0, 1])


def test_eig_unitary_random_eigenrelation():
    rng = np.random.default_rng(7)
    for _ in range(25):
        U = random_su2(rng)
        for g, v in eig_unitary(U):
            assert np.linalg.norm(U @ v - np.exp(1j * g) * v) < 1e-12
