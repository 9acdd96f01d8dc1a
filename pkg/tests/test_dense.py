"""Dense simulator internals plus the recovery-operation sampler oracle."""

import numpy as np
import pytest

from ftqem.dense import DenseState, PauliVecState, apply_basis_element
from ftqem.pauli import PauliString
from ftqem.ptm import TransferMatrix, ptm_of_channel
from ftqem.quasiprob import BasisSet16, PauliChannel, decompose_inverse_1q, invert_pauli_channel


def test_apply_pauli_matches_matrix():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(1, 4))
        vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        vec /= np.linalg.norm(vec)
        p = PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)), int(rng.integers(4)))
        st = DenseState(n, vec)
        st.apply_pauli(p)
        assert np.allclose(st.vec, p.to_matrix() @ vec)


def test_apply_unitary_positions():
    rng = np.random.default_rng(1)
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    st = DenseState(3)
    st.apply_unitary(h, [1])
    # |0>|+>|0> amplitude layout: qubit 0 is the most significant bit
    want = np.zeros(8, dtype=complex)
    want[0b000] = want[0b010] = 1 / np.sqrt(2)
    assert np.allclose(st.vec, want)
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    st.apply_unitary(cnot, [1, 2])
    want = np.zeros(8, dtype=complex)
    want[0b000] = want[0b011] = 1 / np.sqrt(2)
    assert np.allclose(st.vec, want)


def test_measurement_statistics_h_state():
    rng = np.random.default_rng(5)
    hits = 0
    shots = 20000
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    for _ in range(shots):
        st = DenseState(1)
        st.apply_unitary(h, [0])
        if st.measure_z(0, rng) == 1:
            hits += 1
    assert abs(hits / shots - 0.5) < 3 * 0.5 / np.sqrt(shots)


def test_collapse_repeatable():
    rng = np.random.default_rng(9)
    st = DenseState(2)
    st.apply_unitary(np.array([[1, 1], [1, -1]]) / np.sqrt(2), [0])
    p = PauliString.from_label("XI")
    out = st.measure_pauli(p, rng)
    assert st.measure_pauli(p, rng) == out


def test_pauli_vec_matches_pure_evolution():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = 3
        st = DenseState(n)
        mixed = PauliVecState(n)
        for _ in range(5):
            q = int(rng.integers(n))
            theta = rng.uniform(0, 2 * np.pi)
            u = np.array(
                [[np.cos(theta / 2), -1j * np.sin(theta / 2)], [-1j * np.sin(theta / 2), np.cos(theta / 2)]]
            )
            st.apply_unitary(u, [q])
            mixed.apply_linear_map(ptm_of_channel(u, 1), [q])
        p = PauliString.single(n, int(rng.integers(n)), "Z")
        assert mixed.expectation_pauli(p) == pytest.approx(st.expectation_pauli(p), abs=1e-10)
        assert mixed.trace() == pytest.approx(1.0)


def test_stochastic_channel_matches_mixture_of_pure_runs():
    # applying the channel map equals probability-weighted pure Pauli insertions
    n = 2
    ch = PauliChannel.from_xyz(0.1, 0.05, 0.2)
    base = DenseState(n)
    base.apply_unitary(np.array([[1, 1], [1, -1]]) / np.sqrt(2), [0])
    base.apply_unitary(
        np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]), [0, 1]
    )
    mixed = PauliVecState.from_pure(base)
    mixed.apply_linear_map(ch.ptm(), [1])
    obs = PauliString.from_label("ZZ")
    mixture = 0.0
    for prob, label in zip(ch.probs, "IXYZ"):
        st = base.copy()
        st.apply_pauli(PauliString.single(n, 1, label))
        mixture += prob * st.expectation_pauli(obs)
    assert mixed.expectation_pauli(obs) == pytest.approx(mixture, abs=1e-12)


def test_basis_elements_reproduce_ptms_on_pure_states():
    # E[weight * <O>_out] over the forced branch equals Tr[O B rho B^dagger]
    rng = np.random.default_rng(11)
    basis = BasisSet16.instance()
    for index in range(16):
        vec = rng.normal(size=2) + 1j * rng.normal(size=2)
        vec /= np.linalg.norm(vec)
        st = DenseState(1, vec)
        weight = apply_basis_element(st, index, 0)
        for obs_label in ["X", "Y", "Z"]:
            obs = PauliString.from_label(obs_label)
            got = weight * st.expectation_pauli(obs) if weight else 0.0
            b = basis.operators[index]
            rho = np.outer(vec, vec.conj())
            want = np.trace(obs.to_matrix() @ b @ rho @ b.conj().T).real
            assert got == pytest.approx(want, abs=1e-10), (index, obs_label)


def test_weighted_sampler_unbiased_against_exact_inversion():
    # synthetic unitary error: mitigated estimator mean equals ideal expectation
    rng = np.random.default_rng(21)
    theta = 0.35
    err = np.array(
        [[np.cos(theta / 2), -1j * np.sin(theta / 2)], [-1j * np.sin(theta / 2), np.cos(theta / 2)]]
    )
    m_err = ptm_of_channel(err, 1)
    dec = decompose_inverse_1q(TransferMatrix(1, m_err.mat.T))
    obs = PauliString.from_label("Z")

    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    ry = np.array([[np.cos(0.4), -np.sin(0.4)], [np.sin(0.4), np.cos(0.4)]])

    ideal = DenseState(1)
    ideal.apply_unitary(ry, [0])
    want = ideal.expectation_pauli(obs)

    shots = 40000
    total = 0.0
    table = dec.sampling_table()
    for _ in range(shots):
        st = DenseState(1)
        st.apply_unitary(ry, [0])
        st.apply_unitary(err, [0])  # the noise to cancel
        i = int(np.searchsorted(table, rng.random()))
        weight = apply_basis_element(st, int(dec.ops[i]), 0)
        value = dec.gamma * dec.signs[i] * weight * st.expectation_pauli(obs)
        total += value
    mean = total / shots
    se = dec.gamma / np.sqrt(shots)  # conservative scale for the 5-sigma band
    assert abs(mean - want) < 5 * se


def test_dimension_caps():
    with pytest.raises(ValueError):
        DenseState(15)
    with pytest.raises(ValueError):
        PauliVecState(9)
