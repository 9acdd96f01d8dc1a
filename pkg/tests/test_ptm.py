"""Transfer-matrix construction and composition against the trace formula."""

import numpy as np
import pytest

from ftqem.pauli import PauliString
from ftqem.ptm import (
    TransferMatrix,
    expectation,
    observable_row,
    pauli_basis_matrices,
    pauli_from_index,
    pauli_index,
    ptm_apply,
    ptm_compose,
    ptm_of_channel,
    ptm_of_pauli,
    state_to_pauli_vec,
)

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def random_unitary(dim, rng):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_pauli_index_round_trip():
    for n in (1, 2, 3):
        for idx in range(4**n):
            assert pauli_index(pauli_from_index(n, idx)) == idx


def test_basis_order_is_big_endian():
    mats = pauli_basis_matrices(2)
    x = PauliString.from_label("XI")
    assert np.allclose(mats[pauli_index(x)], x.to_matrix())
    z = PauliString.from_label("IZ")
    assert np.allclose(mats[pauli_index(z)], z.to_matrix())


def test_identity_channel_is_identity_matrix():
    m = ptm_of_channel(np.eye(2, dtype=complex), 1)
    assert np.allclose(m.mat, np.eye(4))


def test_hadamard_ptm_permutes_x_and_z():
    m = ptm_of_channel(H, 1).mat
    expected = np.zeros((4, 4))
    expected[0, 0] = 1
    expected[1, 3] = 1  # Z -> X
    expected[3, 1] = 1  # X -> Z
    expected[2, 2] = -1  # Y -> -Y
    assert np.allclose(m, expected, atol=1e-12)


def test_depolarizing_ptm_diagonal():
    p = 0.03
    kraus = [
        np.sqrt(1 - p) * np.eye(2),
        np.sqrt(p / 3) * np.array([[0, 1], [1, 0]]),
        np.sqrt(p / 3) * np.array([[0, -1j], [1j, 0]]),
        np.sqrt(p / 3) * np.diag([1, -1]),
    ]
    m = ptm_of_channel(kraus, 1).mat
    lam = 1 - 4 * p / 3
    assert np.allclose(m, np.diag([1.0, lam, lam, lam]), atol=1e-12)


def test_composition_homomorphism_random_cliffords():
    from ftqem.tableau import CLIFFORD_1Q_UNITARIES

    rng = np.random.default_rng(11)
    for _ in range(20):
        u = np.kron(CLIFFORD_1Q_UNITARIES[rng.integers(24)], CLIFFORD_1Q_UNITARIES[rng.integers(24)])
        v = np.kron(CLIFFORD_1Q_UNITARIES[rng.integers(24)], CLIFFORD_1Q_UNITARIES[rng.integers(24)])
        lhs = ptm_of_channel(u @ v, 2).mat
        rhs = ptm_compose(ptm_of_channel(u, 2), ptm_of_channel(v, 2)).mat
        assert np.abs(lhs - rhs).max() < 1e-12


def test_cptp_first_row_is_trace_preservation():
    rng = np.random.default_rng(23)
    for n in (1, 2):
        dim = 2**n
        # random CPTP map from a Haar unitary on system + environment
        env = 4
        u = random_unitary(dim * env, rng)
        kraus = [u[i * dim : (i + 1) * dim, :dim] for i in range(env)]
        m = ptm_of_channel(kraus, n)
        assert m.is_trace_preserving()
        assert np.abs(m.mat).max() <= 1 + 1e-10


def test_compose_with_identity_and_expectation_values():
    m = ptm_of_channel(H, 1)
    assert np.allclose(ptm_compose(m, TransferMatrix.identity(1)).mat, m.mat)
    zero = np.array([1.0, 0.0])
    col = state_to_pauli_vec(zero, 1)
    assert col[0] == pytest.approx(1.0)
    z_row = observable_row(np.diag([1.0, -1.0]), 1)
    x_row = observable_row(np.array([[0.0, 1.0], [1.0, 0.0]]), 1)
    assert expectation(z_row, m, col) == pytest.approx(0.0, abs=1e-12)
    assert expectation(x_row, m, col) == pytest.approx(1.0)


def test_expectation_matches_dense_oracle_random():
    rng = np.random.default_rng(4)
    for n in (1, 2):
        dim = 2**n
        u = random_unitary(dim, rng)
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi /= np.linalg.norm(psi)
        obs = rng.normal(size=(dim, dim))
        obs = obs + obs.T
        rho = np.outer(psi, psi.conj())
        want = np.trace(obs @ u @ rho @ u.conj().T).real
        got = expectation(observable_row(obs, n), ptm_of_channel(u, n), state_to_pauli_vec(psi, n))
        assert got == pytest.approx(want, abs=1e-10)


def test_ptm_apply_shapes_and_errors():
    m = TransferMatrix.identity(1)
    with pytest.raises(ValueError):
        ptm_apply(m, np.zeros(5))
    with pytest.raises(ValueError):
        ptm_of_channel(np.eye(3, dtype=complex), 1)


def test_ptm_of_pauli_matches_channel_construction():
    for label in ["X", "Z", "Y"]:
        p = PauliString.from_label(label)
        assert np.allclose(ptm_of_pauli(p).mat, ptm_of_channel(p.to_matrix(), 1).mat)
    p2 = PauliString.from_label("XZ")
    assert np.allclose(ptm_of_pauli(p2).mat, ptm_of_channel(p2.to_matrix(), 2).mat)
