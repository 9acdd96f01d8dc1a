"""Clifford+T synthesis, Euler decomposition, error channels, cost fits."""

import numpy as np
import pytest

from ftqem.quasiprob import invert_pauli_channel, PauliChannel
from ftqem.synth import (
    CliffordTSequence,
    approx_error,
    error_channel,
    euler_decompose,
    fit_gamma_vs_t,
    haar_random_su2,
    mitigate_sk,
    rz,
    synthesize_rz,
    synthesize_unitary,
    _GATES,
)


def test_haar_unitarity_and_trace_moment():
    rng = np.random.default_rng(0)
    shots = 100000
    acc = 0.0
    for _ in range(200):
        u = haar_random_su2(rng)
        assert np.abs(u @ u.conj().T - np.eye(2)).max() < 1e-12
    traces = np.empty(shots)
    for i in range(shots):
        u = haar_random_su2(rng)
        traces[i] = abs(u[0, 0] + u[1, 1]) ** 2 / 4
    # E[|tr U|^2] = 1 for Haar SU(2), so the normalized moment is 1/4
    se = traces.std() / np.sqrt(shots)
    assert abs(traces.mean() - 0.25) < 3 * se


def test_haar_left_invariance():
    from scipy.stats import ks_2samp

    rng = np.random.default_rng(42)
    fixed = haar_random_su2(np.random.default_rng(7))
    a = np.empty(4000)
    b = np.empty(4000)
    for i in range(4000):
        u = haar_random_su2(rng)
        a[i] = abs(np.trace(u))
        b[i] = abs(np.trace(fixed @ u))
    assert ks_2samp(a, b).pvalue > 1e-3


def test_euler_identity_and_axis_aligned():
    ang = euler_decompose(np.eye(2))
    assert approx_error(np.eye(2), ang.reconstruct()) < 1e-12
    ang = euler_decompose(rz(0.3))
    assert approx_error(rz(0.3), ang.reconstruct()) < 1e-12


def test_euler_round_trip_haar():
    rng = np.random.default_rng(3)
    for _ in range(100):
        u = haar_random_su2(rng)
        ang = euler_decompose(u)
        assert approx_error(u, ang.reconstruct()) < 1e-10
        for t in ang.angles():
            assert -np.pi < t <= np.pi


def test_euler_rejects_non_unitary():
    with pytest.raises(ValueError):
        euler_decompose(np.array([[1.0, 0.2], [0.0, 1.0]]))


def test_opnorm_closed_form():
    # phase-aligned distance of R_Z(eps) from identity is 2|sin(eps/4)|
    for eps in (0.02, 0.3, 1.1):
        got = approx_error(np.eye(2), rz(eps))
        assert got == pytest.approx(2 * abs(np.sin(eps / 4)), abs=1e-12)
    assert approx_error(rz(0.4), rz(0.4)) < 1e-12


@pytest.mark.parametrize("theta,max_t", [(np.pi / 4, 1), (np.pi / 2, 0), (-np.pi / 4, 1)])
def test_exact_angles(theta, max_t):
    seq = synthesize_rz(theta, 2)
    assert approx_error(rz(theta), seq.unitary) <= 1e-12
    assert seq.t_count <= max_t


def test_eighth_turn_grid():
    for k in range(-4, 5):
        seq = synthesize_rz(k * np.pi / 4, 4)
        assert approx_error(rz(k * np.pi / 4), seq.unitary) <= 1e-12
        assert seq.t_count <= 1


def test_error_monotone_in_budget():
    rng = np.random.default_rng(9)
    for theta in rng.uniform(-np.pi, np.pi, size=3):
        prev = None
        for budget in (0, 2, 4, 6, 8, 10, 12):
            seq = synthesize_rz(float(theta), budget)
            err = approx_error(rz(float(theta)), seq.unitary)
            assert seq.t_count <= budget
            if prev is not None:
                assert err <= prev + 1e-14
            prev = err


def test_synthesis_deterministic():
    a = synthesize_rz(0.913, 8)
    b = synthesize_rz(0.913, 8)
    assert a.gates == b.gates


def test_sequence_consistency_check():
    with pytest.raises(ValueError):
        CliffordTSequence(["H"], _GATES["S"])


def test_error_channel_orthogonal_and_zero_error():
    ch = error_channel(rz(0.2), rz(0.2))
    assert np.allclose(ch.ptm.mat, np.eye(4), atol=1e-12)
    assert ch.opnorm_error < 1e-12
    rng = np.random.default_rng(4)
    u = haar_random_su2(rng)
    seq = synthesize_unitary(u, 12)
    ch = error_channel(u, seq.approx)
    assert np.abs(ch.ptm.mat @ ch.ptm.mat.T - np.eye(4)).max() < 1e-12


def test_mitigate_zero_error_and_monotone_cost():
    dec = mitigate_sk(error_channel(rz(0.4), rz(0.4)))
    assert dec.gamma == pytest.approx(1.0, abs=1e-9)
    # cost grows with the synthesis error over a sweep
    gammas = []
    errors = []
    for eps in (0.01, 0.05, 0.1, 0.2):
        ch = error_channel(np.eye(2), rz(eps))
        gammas.append(mitigate_sk(ch).gamma)
        errors.append(ch.opnorm_error)
    assert all(g2 > g1 for g1, g2 in zip(gammas, gammas[1:]))
    assert all(e2 > e1 for e1, e2 in zip(errors, errors[1:]))


def test_triangle_inequality_three_rotations():
    rng = np.random.default_rng(8)
    for _ in range(10):
        u = haar_random_su2(rng)
        sr = synthesize_unitary(u, 18)
        per_rot = sum(
            approx_error(rz(t), s.unitary)
            for t, s in zip(euler_decompose(u).angles(), sr.sequences)
        )
        assert sr.opnorm_error <= per_rot + 1e-12


def test_fit_recovers_synthetic_constants():
    rng = np.random.default_rng(12)
    beta1, beta2 = 3.9, 0.072
    samples = []
    for n_t in range(20, 90, 6):
        for _ in range(30):
            gamma = 1 + beta1 * np.exp(-beta2 * n_t) * np.exp(rng.normal(0, 0.05))
            samples.append((n_t, gamma))
    fit = fit_gamma_vs_t(samples)
    assert abs(fit.beta1 - beta1) < 2 * max(fit.beta1_stderr, 1e-6) + 0.2
    assert abs(fit.beta2 - beta2) < 2 * fit.beta2_stderr + 0.002
    assert fit.r_squared > 0.9


def test_fit_perfect_exponential_zero_residual():
    samples = [(t, 1 + 2.5 * np.exp(-0.08 * t)) for t in (10, 20, 30, 40)]
    fit = fit_gamma_vs_t(samples)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.beta1 == pytest.approx(2.5, rel=1e-9)
    assert fit.beta2 == pytest.approx(0.08, rel=1e-9)


def test_fit_rejects_degenerate_input():
    with pytest.raises(ValueError):
        fit_gamma_vs_t([(10, 1.0), (20, 1.0), (30, 1.0)])


def test_unitary_error_cost_exceeds_twirled_stochastic():
    rng = np.random.default_rng(21)
    u = haar_random_su2(rng)
    sr = synthesize_unitary(u, 24)
    ch = error_channel(u, sr.approx)
    gamma_u = mitigate_sk(ch).gamma
    # Pauli twirl of the same coherent error
    diag = np.diag(ch.ptm.mat).copy()
    from ftqem.quasiprob import commutation_transform

    probs = commutation_transform(diag, 1) / 4
    gamma_s = invert_pauli_channel(PauliChannel(1, np.clip(probs, 0, 1) / np.clip(probs, 0, 1).sum())).gamma
    assert gamma_u > gamma_s > 1.0
