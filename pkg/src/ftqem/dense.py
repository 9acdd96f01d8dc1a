"""Exact small-system simulation: state vectors and Pauli-basis density vectors.

Pure states live on up to 14 qubits as complex amplitude vectors (qubit 0 is
the most significant bit of the computational index, matching the Kronecker
order used everywhere else).  Mixed states and arbitrary linear maps use the
real length-4**n Pauli-basis vector, capped at 8 qubits.  This module is the
brute-force oracle for the rest of the package, and also hosts the SWAP-test
experiment with per-rotation quasi-probability sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString
from .ptm import TransferMatrix, pauli_basis_matrices, state_to_pauli_vec
from .quasiprob import BasisSet16, QuasiDecomposition

MAX_PURE_QUBITS = 14
MAX_PAULI_VEC_QUBITS = 8


class DenseState:
    """Pure state vector with in-place gate application."""

    def __init__(self, n: int, vec: np.ndarray | None = None):
        if n > MAX_PURE_QUBITS:
            raise ValueError(f"dense simulation capped at {MAX_PURE_QUBITS} qubits")
        self.n = n
        if vec is None:
            self.vec = np.zeros(2**n, dtype=complex)
            self.vec[0] = 1.0
        else:
            vec = np.asarray(vec, dtype=complex)
            if vec.shape != (2**n,):
                raise ValueError("state vector has the wrong length")
            self.vec = vec.copy()

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.vec)

    def apply_unitary(self, u: np.ndarray, qubits) -> None:
        """Apply a k-qubit unitary (k <= 3) to the listed, distinct qubits."""
        qubits = list(qubits)
        k = len(qubits)
        if len(set(qubits)) != k:
            raise ValueError("qubits must be distinct")
        u = np.asarray(u, dtype=complex)
        if u.shape != (2**k, 2**k):
            raise ValueError("unitary dimension does not match qubit count")
        tensor = self.vec.reshape((2,) * self.n)
        tensor = np.moveaxis(tensor, qubits, range(k))
        shape = tensor.shape
        block = tensor.reshape(2**k, -1)
        block = u @ block
        tensor = np.moveaxis(block.reshape(shape), range(k), qubits)
        self.vec = np.ascontiguousarray(tensor).reshape(2**self.n)

    def apply_pauli(self, p: PauliString) -> None:
        if p.n != self.n:
            raise ValueError("size mismatch")
        idx = np.arange(2**self.n)
        # bit of qubit q is (n-1-q); X mask permutes indices, Z mask adds signs
        xbits = 0
        for q in range(self.n):
            if (p.x >> q) & 1:
                xbits |= 1 << (self.n - 1 - q)
        zsign = np.ones(2**self.n, dtype=complex)
        for q in range(self.n):
            if (p.z >> q) & 1:
                zsign *= 1 - 2.0 * ((idx >> (self.n - 1 - q)) & 1)
        out = np.empty_like(self.vec)
        # X^x Z^z acts as Z first, then the X permutation; i**e supplies the phase
        out[idx ^ xbits] = self.vec * zsign
        self.vec = out * (1j**p.e)

    def expectation_pauli(self, p: PauliString) -> float:
        tmp = self.copy()
        tmp.apply_pauli(p)
        val = np.vdot(self.vec, tmp.vec)
        return float(val.real)

    def probability_plus(self, p: PauliString) -> float:
        """Probability of the +1 outcome when measuring Hermitian Pauli p."""
        return 0.5 * (1.0 + self.expectation_pauli(p))

    def measure_pauli(self, p: PauliString, rng: np.random.Generator) -> int:
        """Projective measurement; collapses the state, returns +-1."""
        if not p.is_hermitian:
            raise ValueError("measurement requires a Hermitian Pauli")
        p_plus = self.probability_plus(p)
        outcome = 1 if rng.random() < p_plus else -1
        self.collapse(p, outcome)
        return outcome

    def collapse(self, p: PauliString, outcome: int) -> float:
        """Project onto the (I + outcome*P)/2 eigenspace; returns the branch probability."""
        tmp = self.copy()
        tmp.apply_pauli(p)
        vec = 0.5 * (self.vec + outcome * tmp.vec)
        norm2 = float(np.vdot(vec, vec).real)
        if norm2 < 1e-300:
            raise ZeroDivisionError("collapse onto a zero-probability branch")
        self.vec = vec / np.sqrt(norm2)
        return norm2

    def measure_z(self, qubit: int, rng: np.random.Generator) -> int:
        return self.measure_pauli(PauliString.single(self.n, qubit, "Z"), rng)


class PauliVecState:
    """Density operator as the real Pauli-basis column vector (n <= 8)."""

    def __init__(self, n: int, col: np.ndarray | None = None):
        if n > MAX_PAULI_VEC_QUBITS:
            raise ValueError(f"Pauli-vector evolution capped at {MAX_PAULI_VEC_QUBITS} qubits")
        self.n = n
        if col is None:
            col = state_to_pauli_vec(_zero_state(n), n)
        col = np.asarray(col, dtype=float)
        if col.shape != (4**n,):
            raise ValueError("Pauli vector has the wrong length")
        self.col = col.copy()

    @classmethod
    def from_pure(cls, state: DenseState) -> "PauliVecState":
        return cls(state.n, state_to_pauli_vec(state.vec, state.n))

    def copy(self) -> "PauliVecState":
        return PauliVecState(self.n, self.col)

    def apply_linear_map(self, m: TransferMatrix, qubits) -> None:
        """Apply a k-qubit transfer matrix (k = m.n) to the listed qubits."""
        qubits = list(qubits)
        k = m.n
        if len(qubits) != k:
            raise ValueError("qubit list does not match map arity")
        tensor = self.col.reshape((4,) * self.n)
        tensor = np.moveaxis(tensor, qubits, range(k))
        shape = tensor.shape
        block = tensor.reshape(4**k, -1)
        block = m.mat @ block
        tensor = np.moveaxis(block.reshape(shape), range(k), qubits)
        self.col = np.ascontiguousarray(tensor).reshape(4**self.n)

    def expectation_pauli(self, p: PauliString) -> float:
        from .ptm import pauli_index

        val = self.col[pauli_index(p)] * p.phase
        return float(np.real(val))

    def trace(self) -> float:
        return float(self.col[0])

    def measure_outcome_probability(self, p: PauliString, outcome: int) -> float:
        return 0.5 * (self.trace() + outcome * self.expectation_pauli(p))

    def sample_measurement(self, p: PauliString, rng: np.random.Generator) -> int:
        p_plus = self.measure_outcome_probability(p, 1) / self.trace()
        return 1 if rng.random() < p_plus else -1


def _zero_state(n: int) -> np.ndarray:
    vec = np.zeros(2**n, dtype=complex)
    vec[0] = 1.0
    return vec


def apply_unitary(state: DenseState, u: np.ndarray, qubits) -> None:
    state.apply_unitary(u, qubits)


def apply_linear_map(state: PauliVecState, m: TransferMatrix, qubits) -> None:
    state.apply_linear_map(m, qubits)


def measure(state: DenseState, p: PauliString, rng: np.random.Generator) -> int:
    return state.measure_pauli(p, rng)


def expectation(state, p: PauliString) -> float:
    return state.expectation_pauli(p)


# ---------------------------------------------------------------------------
# Quasi-probability sampling of 16-basis recovery operations on pure states
# ---------------------------------------------------------------------------

# factorization of the non-unitary basis elements into (unitary, projector):
#   (I+sigma)/2               = I * P_{sigma=+1}
#   (sigma_j + i sigma_j+1)/2 = sigma_j * P_{sigma_j+2 = -1}  (check: X(I-Z)/2 = (X+iY)/2)
_PROJECTIVE_FACTORS = {
    7: (None, "X", 1),
    8: (None, "Y", 1),
    9: (None, "Z", 1),
    13: ("X", "Z", -1),
    14: ("Y", "X", -1),
    15: ("Z", "Y", -1),
}


def apply_basis_element(state: DenseState, index: int, qubit: int) -> float:
    """Apply one of the 16 recovery operations to ``qubit``; returns the weight.

    Unitary elements apply directly with weight 1.  Projective elements are
    realized by projecting onto the required eigenspace and folding the branch
    probability into the returned importance weight, which keeps the signed
    estimator unbiased; a zero-probability branch returns weight 0 and leaves
    the state untouched.
    """
    basis = BasisSet16.instance()
    if index in _PROJECTIVE_FACTORS:
        u_name, proj_pauli, proj_sign = _PROJECTIVE_FACTORS[index]
        p = PauliString.single(state.n, qubit, proj_pauli)
        branch = 0.5 * (1.0 + proj_sign * state.expectation_pauli(p))
        if branch < 1e-14:
            return 0.0
        state.collapse(p, proj_sign)
        if u_name is not None:
            state.apply_pauli(PauliString.single(state.n, qubit, u_name))
        return branch
    state.apply_unitary(basis.operators[index], [qubit])
    return 1.0


def mitigation_weight_sampler(
    state: DenseState, dec: QuasiDecomposition, qubit: int, rng: np.random.Generator
) -> tuple[int, int, float]:
    """Sample a recovery operation for one decomposition and apply it.

    Returns ``(index, sign, weight)``; the estimator accumulates
    ``gamma * sign * weight`` per sampled recovery.
    """
    i = dec.sample(rng)
    op = dec.ops[i]
    if isinstance(op, tuple):
        raise ValueError("tensor-product decompositions are sampled factor-wise")
    index = op if isinstance(op, int) else None
    if index is None:
        # Pauli-term decomposition
        state.apply_pauli(op)
        weight = 1.0
    else:
        weight = apply_basis_element(state, index, qubit)
    return i, int(dec.signs[i]), weight
