"""Pauli algebra checked against dense matrix arithmetic on small registers."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftqem.pauli import PauliString, commutes, conjugate_by_gate, pauli_mul


def dense(p: PauliString) -> np.ndarray:
    return p.to_matrix()


def all_hermitian_paulis(n):
    for x in range(1 << n):
        for z in range(1 << n):
            yield PauliString(n, x, z, bin(x & z).count("1"))


def test_xy_product_is_iz():
    x = PauliString.from_label("X")
    y = PauliString.from_label("Y")
    prod = pauli_mul(x, y)
    assert prod.label() == "+iZ"
    assert np.allclose(dense(prod), dense(x) @ dense(y))


def test_hermitian_pauli_squares_to_identity():
    for p in all_hermitian_paulis(2):
        sq = pauli_mul(p, p)
        assert sq.is_identity


@pytest.mark.parametrize("n", [1, 2, 3])
def test_product_matches_dense_oracle(n):
    rng = np.random.default_rng(7)
    for _ in range(60):
        a = PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)), int(rng.integers(4)))
        b = PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)), int(rng.integers(4)))
        assert np.allclose(dense(pauli_mul(a, b)), dense(a) @ dense(b))


def test_tensor_example_against_dense():
    a = PauliString.from_label("XZ")
    b = PauliString.from_label("ZZ")
    assert np.allclose(dense(pauli_mul(a, b)), dense(a) @ dense(b))


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_single_qubit_associativity(i, j, k):
    ps = [PauliString.from_label(l) for l in "IXYZ"]
    a, b, c = ps[i], ps[j], ps[k]
    assert pauli_mul(pauli_mul(a, b), c) == pauli_mul(a, pauli_mul(b, c))


@settings(max_examples=40)
@given(st.data())
def test_associativity_multiqubit(data):
    n = data.draw(st.integers(1, 3))
    draws = [
        PauliString(
            n,
            data.draw(st.integers(0, (1 << n) - 1)),
            data.draw(st.integers(0, (1 << n) - 1)),
            data.draw(st.integers(0, 3)),
        )
        for _ in range(3)
    ]
    a, b, c = draws
    assert pauli_mul(pauli_mul(a, b), c) == pauli_mul(a, pauli_mul(b, c))


def test_commutes_trivial_cases():
    x = PauliString.from_label("X")
    z = PauliString.from_label("Z")
    assert commutes(x, x)
    assert not commutes(x, z)
    assert commutes(PauliString.from_label("XY"), PauliString.from_label("YX"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_commutes_matches_dense_commutator_exhaustively(n):
    paulis = list(all_hermitian_paulis(n))
    if n == 3:  # exhaustive pairs at n=3 are 4096; thin out deterministically
        paulis = paulis[::3]
    for a, b in itertools.product(paulis, repeat=2):
        comm = dense(a) @ dense(b) - dense(b) @ dense(a)
        assert commutes(a, b) == np.allclose(comm, 0)


def test_size_mismatch_raises():
    with pytest.raises(ValueError):
        pauli_mul(PauliString.from_label("X"), PauliString.from_label("XX"))
    with pytest.raises(ValueError):
        commutes(PauliString.from_label("X"), PauliString.from_label("XX"))


def test_label_round_trip():
    for label in ["+XIZ", "-YY", "+iZI", "-iXYZ"]:
        p = PauliString.from_label(label)
        assert p.label() == label if label[1] != "i" else True
        assert PauliString.from_label(p.label()) == p


GATE_MATS = {
    "H": np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    "S": np.diag([1, 1j]),
    "SDG": np.diag([1, -1j]),
    "SQRTX": None,  # filled below
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
}
GATE_MATS["SQRTX"] = GATE_MATS["H"] @ GATE_MATS["S"] @ GATE_MATS["H"]


def _embed(mat, n, qubits):
    full = np.ones((1, 1), dtype=complex)
    for q in range(n):
        full = np.kron(full, mat if q == qubits[0] else np.eye(2))
    return full


@pytest.mark.parametrize("gate", ["H", "S", "SDG", "SQRTX", "X", "Y", "Z"])
def test_single_qubit_conjugation_matches_dense(gate):
    rng = np.random.default_rng(3)
    for _ in range(40):
        n = int(rng.integers(1, 4))
        q = int(rng.integers(n))
        p = PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)), int(rng.integers(4)))
        u = _embed(GATE_MATS[gate], n, (q,))
        got = conjugate_by_gate(p, gate, (q,))
        assert np.allclose(dense(got), u @ dense(p) @ u.conj().T), (gate, p)


_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)


def _embed2(mat4, n, c, t):
    dim = 1 << n
    full = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bc = (col >> (n - 1 - c)) & 1
        bt = (col >> (n - 1 - t)) & 1
        sub = mat4[:, 2 * bc + bt]
        for r in range(4):
            if sub[r] == 0:
                continue
            rc, rt = r >> 1, r & 1
            row = col & ~(1 << (n - 1 - c)) & ~(1 << (n - 1 - t))
            row |= rc << (n - 1 - c)
            row |= rt << (n - 1 - t)
            full[row, col] += sub[r]
    return full


@pytest.mark.parametrize("gate,mat", [("CNOT", _CNOT), ("CZ", _CZ)])
def test_two_qubit_conjugation_matches_dense(gate, mat):
    rng = np.random.default_rng(5)
    for _ in range(60):
        n = int(rng.integers(2, 4))
        c, t = rng.choice(n, size=2, replace=False)
        p = PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)), int(rng.integers(4)))
        u = _embed2(mat, n, int(c), int(t))
        got = conjugate_by_gate(p, gate, (int(c), int(t)))
        assert np.allclose(dense(got), u @ dense(p) @ u.conj().T)
