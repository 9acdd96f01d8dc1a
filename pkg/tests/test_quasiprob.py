"""Inverse-channel decompositions against numerical PTM inversion."""

import numpy as np
import pytest

from ftqem.ptm import TransferMatrix, ptm_compose, ptm_of_channel
from ftqem.quasiprob import (
    BasisSet16,
    PauliChannel,
    QuasiDecomposition,
    SingularChannelError,
    circuit_cost,
    decompose_inverse_1q,
    first_order_cost,
    invert_pauli_channel,
    invert_pauli_channel_1q_closed_form,
    qem_cost,
    sampling_overhead,
    tensor_decomposition,
)


def decomposition_ptm(dec: QuasiDecomposition) -> np.ndarray:
    """Pauli-term decompositions summed as PTMs (oracle helper)."""
    from ftqem.ptm import ptm_of_pauli

    total = np.zeros((4**dec.n, 4**dec.n))
    for eta, op in zip(dec.etas, dec.ops):
        total += eta * ptm_of_pauli(op).mat
    return total


def test_identity_channel_inverts_trivially():
    dec = invert_pauli_channel(PauliChannel.identity(1))
    assert dec.gamma == pytest.approx(1.0)
    assert dec.etas[0] == pytest.approx(1.0)
    assert np.abs(dec.etas[1:]).max() < 1e-14


def test_symmetric_depolarizing_cost_closed_form():
    ch = PauliChannel.from_xyz(0.01, 0.01, 0.01)
    dec = invert_pauli_channel(ch)
    assert dec.gamma == pytest.approx(0.5 * (-1 + 3 / (1 - 0.04)), abs=1e-12)
    assert dec.gamma == pytest.approx(1.0625)


def test_table_row_d5_cost():
    # channel strengths measured for a distance-5 logical idle at p=0.01
    ch = PauliChannel.from_xyz(1.80e-4, 1.96e-6, 1.80e-4)
    dec = invert_pauli_channel(ch)
    assert dec.gamma == pytest.approx(1.000726, abs=5e-6)


def test_closed_form_matches_transform():
    # the explicit gamma formula assumes the small-error regime where the
    # three non-identity coefficients are non-positive
    rng = np.random.default_rng(2)
    for _ in range(50):
        px, py, pz = rng.uniform(0.005, 0.02, size=3)
        (ei, ex, ey, ez), gamma = invert_pauli_channel_1q_closed_form(px, py, pz)
        dec = invert_pauli_channel(PauliChannel.from_xyz(px, py, pz))
        assert np.allclose(dec.etas, [ei, ex, ey, ez], atol=1e-12)
        assert max(ex, ey, ez) <= 0
        assert dec.gamma == pytest.approx(gamma, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2])
def test_inverse_property_random_channels(n):
    rng = np.random.default_rng(8)
    for _ in range(250):
        raw = rng.uniform(0, 1, size=4**n - 1)
        raw *= rng.uniform(0, 0.2) / raw.sum()
        probs = np.concatenate([[1 - raw.sum()], raw])
        ch = PauliChannel(n, probs)
        dec = invert_pauli_channel(ch)
        prod = decomposition_ptm(dec) @ ch.ptm().mat
        assert np.abs(prod - np.eye(4**n)).max() < 1e-10
        assert dec.gamma >= 1.0


def test_gamma_one_iff_identity():
    assert invert_pauli_channel(PauliChannel.identity(1)).gamma == pytest.approx(1.0)
    dec = invert_pauli_channel(PauliChannel.from_xyz(1e-5, 0, 0))
    assert dec.gamma > 1.0


def test_singular_channel_raises():
    # p_err = 1/2 on X kills the Z and Y diagonals
    with pytest.raises(SingularChannelError):
        invert_pauli_channel(PauliChannel.from_xyz(0.5, 0.0, 0.0))


def test_cost_and_overhead():
    dec = invert_pauli_channel(PauliChannel.from_xyz(0.01, 0.01, 0.01))
    assert qem_cost(dec) == pytest.approx(1.0625)
    assert sampling_overhead(dec) == pytest.approx(1.0625**2)
    assert circuit_cost([dec.gamma] * 5) == pytest.approx(dec.gamma**5)


def test_first_order_cost_values():
    assert first_order_cost(0.0) == 1.0
    assert first_order_cost(3.62e-4) == pytest.approx(1.000724)
    ch = PauliChannel.from_xyz(1.80e-4, 1.96e-6, 1.80e-4)
    exact = invert_pauli_channel(ch).gamma
    assert abs(first_order_cost(ch.p_err) - exact) <= 4 * ch.p_err**2


def test_first_order_gap_bound_uniform_depolarizing():
    for p_err in np.linspace(1e-4, 0.05, 25):
        ch = PauliChannel.from_xyz(p_err / 3, p_err / 3, p_err / 3)
        exact = invert_pauli_channel(ch).gamma
        assert abs(first_order_cost(p_err) - exact) <= 4 * p_err**2


def test_sign_probability_consistency():
    dec = invert_pauli_channel(PauliChannel.from_xyz(0.02, 0.005, 0.013))
    assert float(np.sum(dec.q * dec.signs) * dec.gamma) == pytest.approx(np.sum(dec.etas))
    assert np.sum(dec.etas) == pytest.approx(1.0)
    assert dec.q.sum() == pytest.approx(1.0)


# -- 16-operator basis ------------------------------------------------------


def test_basis_is_complete_and_identity_decomposes():
    dec = decompose_inverse_1q(TransferMatrix.identity(1))
    assert dec.etas[0] == pytest.approx(1.0)
    assert np.abs(dec.etas[1:]).max() <= 1e-12


def test_basis_matches_pauli_inversion_on_pauli_channels():
    rng = np.random.default_rng(5)
    for _ in range(20):
        px, py, pz = rng.uniform(0, 0.05, size=3)
        ch = PauliChannel.from_xyz(px, py, pz)
        pauli_dec = invert_pauli_channel(ch)
        lam = ch.ptm_diagonal()
        target = TransferMatrix.diagonal(1, 1.0 / lam)
        basis_dec = decompose_inverse_1q(target)
        assert np.allclose(basis_dec.etas[:4], pauli_dec.etas, atol=1e-10)
        assert np.abs(basis_dec.etas[4:]).max() < 1e-10


def test_unitary_error_cost_exceeds_stochastic_of_same_strength():
    # a coherent rotation costs more to invert than its Pauli twirl, which is
    # the stochastic channel with identical PTM decay
    theta = 0.05
    u = np.array(
        [[np.cos(theta / 2), -1j * np.sin(theta / 2)], [-1j * np.sin(theta / 2), np.cos(theta / 2)]]
    )
    m = ptm_of_channel(u, 1)
    dec_u = decompose_inverse_1q(TransferMatrix(1, m.mat.T))
    # verify inversion: decomposition composed with the channel gives identity
    basis = BasisSet16.instance()
    total = sum(eta * basis.ptms[i] for eta, i in zip(dec_u.etas, dec_u.ops))
    assert np.abs(total @ m.mat - np.eye(4)).max() < 1e-10
    dec_s = invert_pauli_channel(PauliChannel.from_xyz(np.sin(theta / 2) ** 2, 0.0, 0.0))
    assert dec_u.gamma > dec_s.gamma > 1.0


def test_tensor_decomposition_costs_multiply():
    ident = invert_pauli_channel(PauliChannel.identity(1))
    assert tensor_decomposition([ident, ident]).gamma == pytest.approx(1.0)
    ch = invert_pauli_channel(PauliChannel.from_xyz(0.01, 0.01, 0.01))
    pair = tensor_decomposition([ch, ch])
    assert pair.gamma == pytest.approx(1.0625**2)
    other = invert_pauli_channel(PauliChannel.from_xyz(0.002, 0.02, 0.004))
    assert tensor_decomposition([ch, other]).gamma == pytest.approx(
        tensor_decomposition([other, ch]).gamma
    )


def test_json_round_trip():
    dec = invert_pauli_channel(PauliChannel.from_xyz(0.01, 0.02, 0.03))
    back = QuasiDecomposition.from_json(dec.to_json())
    assert np.allclose(back.etas, dec.etas)
    assert back.ops == dec.ops
    basis_dec = decompose_inverse_1q(TransferMatrix.identity(1))
    back2 = QuasiDecomposition.from_json(basis_dec.to_json())
    assert back2.ops == basis_dec.ops


def test_scaled_channel():
    ch = PauliChannel.from_xyz(0.01, 0.02, 0.03)
    up = ch.scaled(1.5)
    assert up.probs[1] == pytest.approx(0.015)
    assert up.probs.sum() == pytest.approx(1.0)
    off = ch.scaled(0.0)
    assert off.p_err == pytest.approx(0.0)
