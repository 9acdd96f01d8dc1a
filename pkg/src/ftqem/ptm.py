"""Pauli transfer matrix (PTM) representation of states, observables, channels.

Conventions shared by every module:

* basis order: base-4 big-endian over (I, X, Y, Z) with qubit 0 as the most
  significant digit, e.g. for two qubits index 7 = ``4*1 + 3`` is X (x) Z.
* ``TransferMatrix.mat[j, i] = Tr[P_j E(P_i)] / 2**n`` (row = output Pauli),
  so maps compose by plain matrix product and expectation values read
  ``row @ mat @ col``.
* a density matrix maps to the column ``col[i] = Tr[P_i rho]`` and an
  observable to the row ``row[j] = Tr[O P_j] / 2**n``; for a normalized state
  ``col[0] == 1``.
"""

from __future__ import annotations

import numpy as np

from .pauli import _PAULI_MATS, PauliString

_LETTER_FROM_BITS = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}


def pauli_index(p: PauliString) -> int:
    """Basis index of the (unsigned) Pauli letters of ``p``."""
    idx = 0
    for q in range(p.n):
        idx = idx * 4 + p.restricted_letter_index(q)
    return idx


def pauli_from_index(n: int, idx: int) -> PauliString:
    """Hermitian Pauli for a basis index (inverse of :func:`pauli_index`)."""
    x = z = 0
    for q in reversed(range(n)):
        digit = idx % 4
        idx //= 4
        bx, bz = ((0, 0), (1, 0), (1, 1), (0, 1))[digit]
        x |= bx << q
        z |= bz << q
    return PauliString(n, x, z, bin(x & z).count("1"))


def pauli_basis_matrices(n: int) -> np.ndarray:
    """All 4**n Pauli matrices stacked in basis order (n <= 6)."""
    if n > 6:
        raise ValueError("dense Pauli basis capped at 6 qubits")
    mats = np.ones((1, 1, 1), dtype=complex)
    for _ in range(n):
        mats = np.einsum("iab,jcd->ijacbd", mats, np.stack(_PAULI_MATS)).reshape(
            mats.shape[0] * 4, mats.shape[1] * 2, mats.shape[2] * 2
        )
    return mats


class TransferMatrix:
    """Real 4**n x 4**n matrix acting on Pauli-basis vectors."""

    __slots__ = ("n", "mat")

    def __init__(self, n: int, mat: np.ndarray):
        mat = np.asarray(mat, dtype=float)
        if mat.shape != (4**n, 4**n):
            raise ValueError(f"expected shape {(4**n, 4**n)}, got {mat.shape}")
        self.n = n
        self.mat = mat

    @classmethod
    def identity(cls, n: int) -> "TransferMatrix":
        return cls(n, np.eye(4**n))

    @classmethod
    def diagonal(cls, n: int, diag: np.ndarray) -> "TransferMatrix":
        return cls(n, np.diag(np.asarray(diag, dtype=float)))

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return ptm_compose(self, other)

    def is_trace_preserving(self, atol: float = 1e-10) -> bool:
        row0 = np.zeros(4**self.n)
        row0[0] = 1.0
        return np.allclose(self.mat[0], row0, atol=atol)


def ptm_of_channel(kraus_or_unitary, n: int) -> TransferMatrix:
    """PTM of a channel given a unitary matrix or an iterable of Kraus operators.

    Dense construction, capped at n <= 6 by the 4**n memory wall.
    """
    if n > 6:
        raise ValueError("dense PTM construction capped at 6 qubits")
    d = 2**n
    if isinstance(kraus_or_unitary, np.ndarray) and kraus_or_unitary.ndim == 2:
        kraus = [np.asarray(kraus_or_unitary, dtype=complex)]
    else:
        kraus = [np.asarray(k, dtype=complex) for k in kraus_or_unitary]
    for k in kraus:
        if k.shape != (d, d):
            raise ValueError(f"Kraus operator shape {k.shape} is not ({d}, {d})")
    basis = pauli_basis_matrices(n)
    # E(P_i) for all i at once, then all traces against P_j.
    image = np.zeros((4**n, d, d), dtype=complex)
    for k in kraus:
        image += np.einsum("ab,ibc,dc->iad", k, basis, k.conj())
    mat = np.einsum("jda,iad->ji", basis, image) / d
    if np.abs(mat.imag).max() > 1e-9:
        raise ValueError("channel produced a non-real transfer matrix")
    return TransferMatrix(n, mat.real)


def ptm_of_pauli(p: PauliString) -> TransferMatrix:
    """PTM of conjugation by a Pauli operator: diagonal of +-1 entries."""
    from .pauli import commutes

    diag = np.empty(4**p.n)
    for i in range(4**p.n):
        diag[i] = 1.0 if commutes(p, pauli_from_index(p.n, i)) else -1.0
    return TransferMatrix(p.n, np.diag(diag))


def ptm_compose(b: TransferMatrix, a: TransferMatrix) -> TransferMatrix:
    """PTM of ``b`` after ``a`` (matrix product ``b.mat @ a.mat``)."""
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    return TransferMatrix(a.n, b.mat @ a.mat)


def ptm_apply(m: TransferMatrix, col: np.ndarray) -> np.ndarray:
    col = np.asarray(col, dtype=float)
    if col.shape != (4**m.n,):
        raise ValueError("dimension mismatch")
    return m.mat @ col


def expectation(row: np.ndarray, m: TransferMatrix, col: np.ndarray) -> float:
    """Tr[O E(rho)] for an observable row and state column."""
    return float(np.asarray(row) @ m.mat @ np.asarray(col))


def state_to_pauli_vec(state: np.ndarray, n: int) -> np.ndarray:
    """Column vector Tr[P_i rho] from a density matrix or pure state vector."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        rho = np.outer(state, state.conj())
    else:
        rho = state
    basis = pauli_basis_matrices(n)
    col = np.einsum("iab,ba->i", basis, rho)
    return col.real.copy()


def observable_row(obs: np.ndarray, n: int) -> np.ndarray:
    """Row vector Tr[O P_j] / 2**n from a dense observable matrix."""
    obs = np.asarray(obs, dtype=complex)
    basis = pauli_basis_matrices(n)
    row = np.einsum("ab,jba->j", obs, basis) / 2**n
    return row.real.copy()


def pauli_vec_of_computational_zero(n: int) -> np.ndarray:
    """|0...0> as a Pauli-basis column (all-Z-substring entries equal 1)."""
    col = np.zeros(4**n)
    for idx in range(4**n):
        digits = np.base_repr(idx, 4).zfill(n)
        if all(ch in "03" for ch in digits):
            col[idx] = 1.0
    return col
