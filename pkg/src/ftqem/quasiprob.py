"""Quasi-probability decompositions of inverse noise channels.

Stochastic Pauli channels are inverted in closed form: the PTM of a Pauli
channel is diagonal with entries ``lam_Q = sum_g p_g c(g, Q)`` where
``c(g, Q) = +-1`` encodes commutation, and the inverse-channel coefficients
are ``eta_g = 4**-n sum_Q c(g, Q) / lam_Q``.  Both directions are the same
self-inverse transform (up to 4**n), applied tensor-factor by tensor-factor
in O(4**n n) instead of dense 4**n inversion.

Arbitrary single-qubit maps are decomposed exactly over a fixed 16-operator
basis (identity, the three Paulis, four kinds of axis combinations); the 16
PTMs span the full 16-dimensional space, so the linear system has a unique
solution and no cost optimization is involved.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString
from .ptm import TransferMatrix, pauli_from_index, ptm_of_channel

SINGULAR_TOL = 1e-9

# per-qubit commutation-sign matrix over (I, X, Y, Z); self-inverse up to 4
_C1 = np.array(
    [
        [1, 1, 1, 1],
        [1, 1, -1, -1],
        [1, -1, 1, -1],
        [1, -1, -1, 1],
    ],
    dtype=float,
)


class SingularChannelError(ValueError):
    """Raised when a channel has a (near-)zero PTM diagonal entry."""


def commutation_transform(values: np.ndarray, n: int) -> np.ndarray:
    """Apply the tensor-product commutation-sign matrix to a 4**n vector."""
    v = np.asarray(values, dtype=float).reshape((4,) * n) if n > 1 else np.asarray(values, dtype=float)
    v = v.reshape((4,) * n)
    for axis in range(n):
        v = np.tensordot(_C1, v, axes=([1], [axis]))
        v = np.moveaxis(v, 0, axis)
    return v.reshape(4**n)


@dataclass(frozen=True)
class PauliChannel:
    """Stochastic Pauli channel: probabilities over the 4**n Hermitian Paulis."""

    n: int
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (4**self.n,):
            raise ValueError(f"expected {4**self.n} probabilities")
        if probs.min() < -1e-12:
            raise ValueError("negative probability")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {probs.sum()}, not 1")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_xyz(cls, p_x: float, p_y: float, p_z: float) -> "PauliChannel":
        return cls(1, np.array([1.0 - p_x - p_y - p_z, p_x, p_y, p_z]))

    @classmethod
    def depolarizing(cls, p: float, n: int = 1) -> "PauliChannel":
        """Uniform depolarizing: identity with 1-p, each other Pauli with p/(4**n - 1)."""
        probs = np.full(4**n, p / (4**n - 1))
        probs[0] = 1.0 - p
        return cls(n, probs)

    @classmethod
    def identity(cls, n: int = 1) -> "PauliChannel":
        probs = np.zeros(4**n)
        probs[0] = 1.0
        return cls(n, probs)

    @property
    def p_err(self) -> float:
        return float(self.probs[1:].sum())

    def scaled(self, factor: float) -> "PauliChannel":
        """Scale every non-identity probability by ``factor`` (>= 0)."""
        probs = self.probs * factor
        probs[0] = 1.0 - probs[1:].sum()
        return PauliChannel(self.n, probs)

    def ptm_diagonal(self) -> np.ndarray:
        return commutation_transform(self.probs, self.n)

    def ptm(self) -> TransferMatrix:
        return TransferMatrix.diagonal(self.n, self.ptm_diagonal())

    def sampling_table(self) -> tuple[np.ndarray, np.ndarray]:
        """(cumulative probabilities, pauli indices) for fast shot sampling."""
        idx = np.nonzero(self.probs > 0)[0]
        return np.cumsum(self.probs[idx]), idx

    def tensor(self, other: "PauliChannel") -> "PauliChannel":
        return PauliChannel(self.n + other.n, np.kron(self.probs, other.probs))


@dataclass(frozen=True)
class QuasiDecomposition:
    """Signed mixture ``sum_i eta_i B_i`` representing an inverse channel.

    ``ops`` entries are either :class:`PauliString` instances or basis-element
    descriptors from :class:`BasisSet16` (tuples of element ids for tensor
    products).
    """

    n: int
    etas: np.ndarray
    ops: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "etas", np.asarray(self.etas, dtype=float))
        if len(self.ops) != len(self.etas):
            raise ValueError("one operation per coefficient required")

    @property
    def gamma(self) -> float:
        return float(np.abs(self.etas).sum())

    @property
    def q(self) -> np.ndarray:
        return np.abs(self.etas) / self.gamma

    @property
    def signs(self) -> np.ndarray:
        return np.where(self.etas >= 0, 1, -1)

    def sample(self, rng: np.random.Generator) -> int:
        """Index ``i`` drawn with probability ``q_i``."""
        return int(rng.choice(len(self.etas), p=self.q))

    def sampling_table(self) -> np.ndarray:
        return np.cumsum(self.q)

    def to_json(self) -> str:
        def op_key(op):
            if isinstance(op, PauliString):
                return {"pauli": op.label()}
            return {"basis": list(op) if isinstance(op, tuple) else op}

        return json.dumps(
            {
                "n": self.n,
                "gamma": self.gamma,
                "terms": [
                    {"eta": float(e), "q": float(qi), "sign": int(s), "op": op_key(op)}
                    for e, qi, s, op in zip(self.etas, self.q, self.signs, self.ops)
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "QuasiDecomposition":
        data = json.loads(text)
        etas, ops = [], []
        for term in data["terms"]:
            etas.append(term["eta"])
            op = term["op"]
            if "pauli" in op:
                ops.append(PauliString.from_label(op["pauli"]))
            else:
                b = op["basis"]
                ops.append(tuple(b) if isinstance(b, list) else b)
        return cls(data["n"], np.array(etas), tuple(ops))


def qem_cost(dec: QuasiDecomposition) -> float:
    return dec.gamma

def sampling_overhead(dec: QuasiDecomposition) -> float:
    return dec.gamma**2

def circuit_cost(gammas) -> float:
    """Total QEM cost of a circuit: product of the per-gate costs."""
    return float(np.prod(np.asarray(list(gammas), dtype=float)))


def first_order_cost(p_dec: float) -> float:
    """First-order approximation 1 + 2 p_dec of the Pauli-inversion cost."""
    if not 0 <= p_dec < 0.5:
        raise ValueError("p_dec must be in [0, 0.5)")
    return 1.0 + 2.0 * p_dec


def invert_pauli_channel(ch: PauliChannel) -> QuasiDecomposition:
    """Closed-form quasi-probability inverse of a stochastic Pauli channel."""
    lam = ch.ptm_diagonal()
    if np.abs(lam).min() < SINGULAR_TOL:
        raise SingularChannelError(
            f"channel PTM diagonal has entries below {SINGULAR_TOL}; not invertible"
        )
    etas = commutation_transform(1.0 / lam, ch.n) / 4**ch.n
    ops = tuple(pauli_from_index(ch.n, i) for i in range(4**ch.n))
    return QuasiDecomposition(ch.n, etas, ops)


def invert_pauli_channel_1q_closed_form(p_x: float, p_y: float, p_z: float):
    """Explicit single-qubit coefficients (eta_I, eta_X, eta_Y, eta_Z), gamma."""
    a = 1.0 / (1.0 - 2.0 * (p_y + p_z))
    b = 1.0 / (1.0 - 2.0 * (p_z + p_x))
    c = 1.0 / (1.0 - 2.0 * (p_x + p_y))
    eta_i = 0.25 * (1.0 + a + b + c)
    eta_x = 0.25 * (1.0 + a - b - c)
    eta_y = 0.25 * (1.0 - a + b - c)
    eta_z = 0.25 * (1.0 - a - b + c)
    gamma = 0.5 * (-1.0 + a + b + c)
    return (eta_i, eta_x, eta_y, eta_z), gamma


# ---------------------------------------------------------------------------
# 16-operator single-qubit basis
# ---------------------------------------------------------------------------

_SIGMA = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_I2 = np.eye(2, dtype=complex)


def _basis_operators() -> list[tuple[str, np.ndarray]]:
    ops = [("I", _I2)]
    for name, s in _SIGMA.items():
        ops.append((name, s))
    for name, s in _SIGMA.items():
        ops.append((f"(I+i{name})/sqrt2", (_I2 + 1j * s) / np.sqrt(2)))
    for name, s in _SIGMA.items():
        ops.append((f"(I+{name})/2", (_I2 + s) / 2))
    for a, b in (("X", "Y"), ("Y", "Z"), ("Z", "X")):
        ops.append((f"({a}+{b})/sqrt2", (_SIGMA[a] + _SIGMA[b]) / np.sqrt(2)))
    for a, b in (("X", "Y"), ("Y", "Z"), ("Z", "X")):
        ops.append((f"({a}+i{b})/2", (_SIGMA[a] + 1j * _SIGMA[b]) / 2))
    return ops


class BasisSet16:
    """The 16 single-qubit recovery operations and their PTMs.

    Elements 0..3 are I, X, Y, Z; 4..6 the pi/2 rotations (I+i sigma)/sqrt2;
    7..9 the projectors (I+sigma)/2; 10..12 the Hermitian reflections
    (sigma_j+sigma_j+1)/sqrt2; 13..15 the non-unitary (sigma_j+i sigma_j+1)/2.
    Each element acts as rho -> B rho B^dagger.
    """

    def __init__(self):
        ops = _basis_operators()
        self.names = [name for name, _ in ops]
        self.operators = [op for _, op in ops]
        self.ptms = [ptm_of_channel([op], 1).mat for op in self.operators]
        stack = np.stack([m.reshape(16) for m in self.ptms], axis=1)
        if np.linalg.matrix_rank(stack) != 16:  # pragma: no cover - sanity
            raise RuntimeError("basis PTMs do not span the 16-dim space")
        self._solve_matrix = stack

    _instance = None

    @classmethod
    def instance(cls) -> "BasisSet16":
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    def is_unitary(self, i: int) -> bool:
        b = self.operators[i]
        return bool(np.allclose(b.conj().T @ b, _I2, atol=1e-12))

    def is_pauli(self, i: int) -> bool:
        return i < 4


def decompose_inverse_1q(target: TransferMatrix) -> QuasiDecomposition:
    """Exact coefficients of a 4x4 PTM over the 16-operator basis.

    ``target`` is the map to synthesize (typically an inverse channel); the
    16-unknown linear system is square and nonsingular, so the solution is
    unique.  Residuals above 1e-10 indicate a non-physical input.
    """
    if target.n != 1:
        raise ValueError("16-operator decomposition is single-qubit only")
    basis = BasisSet16.instance()
    etas, *_ = np.linalg.lstsq(basis._solve_matrix, target.mat.reshape(16), rcond=None)
    residual = np.abs(basis._solve_matrix @ etas - target.mat.reshape(16)).max()
    if residual > 1e-10:
        raise SingularChannelError(f"basis decomposition residual {residual:.2e}")
    etas = np.where(np.abs(etas) < 1e-14, 0.0, etas)
    return QuasiDecomposition(1, etas, tuple(range(16)))


def tensor_decomposition(decs: list[QuasiDecomposition]) -> QuasiDecomposition:
    """Tensor product of single-qubit decompositions; costs multiply."""
    if not decs:
        raise ValueError("empty decomposition list")
    if len(decs) > 6:
        raise ValueError("materialized tensor decompositions capped at 6 factors")
    n = sum(d.n for d in decs)
    etas, ops = [], []
    for combo in itertools.product(*(range(len(d.etas)) for d in decs)):
        eta = 1.0
        op_parts = []
        for d, i in zip(decs, combo):
            eta *= d.etas[i]
            op = d.ops[i]
            op_parts.extend(op if isinstance(op, tuple) else (op,))
        if eta != 0.0:
            etas.append(eta)
            ops.append(tuple(op_parts))
    return QuasiDecomposition(n, np.array(etas), tuple(ops))
