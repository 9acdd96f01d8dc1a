"""CHP-style stabilizer simulator with bit-packed rows.

The tableau keeps 2n generator rows (destabilizers then stabilizers), each a
signed Pauli in the ``i**e X^x Z^z`` encoding of :mod:`ftqem.pauli`, with the
x/z masks packed into uint64 words so row updates vectorize across the whole
tableau.  The phase exponent ``e`` is tracked exactly modulo 4.

Also provides the random-circuit machinery used by the logical Clifford
benchmarks: uniform sampling over the 24 single-qubit Cliffords, layered
CNOT circuits, a deterministic +1 observable of the output state, and
layer-by-layer back-propagation of that observable so stochastic Pauli noise
can be scored by anticommutation alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString, commutes, conjugate_by_gate, pauli_mul

_WORD = 64

_GATE_INVERSE = {
    "H": "H",
    "S": "SDG",
    "SDG": "S",
    "SQRTX": "SQRTXDG",
    "SQRTXDG": "SQRTX",
    "X": "X",
    "Y": "Y",
    "Z": "Z",
    "CNOT": "CNOT",
    "CZ": "CZ",
}


def _popcount_rows(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


class StabilizerTableau:
    """Generator tableau for an n-qubit stabilizer state, initially |0...0>."""

    def __init__(self, n: int):
        self.n = n
        self.w = (n + _WORD - 1) // _WORD
        self.x = np.zeros((2 * n, self.w), dtype=np.uint64)
        self.z = np.zeros((2 * n, self.w), dtype=np.uint64)
        self.e = np.zeros(2 * n, dtype=np.int64)
        for q in range(n):
            self.x[q, q // _WORD] = np.uint64(1) << np.uint64(q % _WORD)
            self.z[n + q, q // _WORD] = np.uint64(1) << np.uint64(q % _WORD)

    # -- packing helpers --------------------------------------------------
    def _mask(self, qubits) -> np.ndarray:
        m = np.zeros(self.w, dtype=np.uint64)
        for q in qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range")
            m[q // _WORD] |= np.uint64(1) << np.uint64(q % _WORD)
        return m

    def _pack(self, value: int) -> np.ndarray:
        out = np.zeros(self.w, dtype=np.uint64)
        for w in range(self.w):
            out[w] = (value >> (_WORD * w)) & 0xFFFFFFFFFFFFFFFF
        return out

    def _unpack(self, words: np.ndarray) -> int:
        value = 0
        for w in range(self.w):
            value |= int(words[w]) << (_WORD * w)
        return value

    def row_pauli(self, i: int) -> PauliString:
        return PauliString(self.n, self._unpack(self.x[i]), self._unpack(self.z[i]), int(self.e[i]) % 4)

    # -- gates -------------------------------------------------------------
    def apply_gate(self, name: str, *qubits: int) -> None:
        if name == "CNOT":
            c, t = qubits
            cm, tm = self._mask([c]), self._mask([t])
            xc = (self.x & cm).any(axis=1)
            zt = (self.z & tm).any(axis=1)
            self.x[xc] ^= tm
            self.z[zt] ^= cm
            return
        if name == "CZ":
            c, t = qubits
            cm, tm = self._mask([c]), self._mask([t])
            xc = (self.x & cm).any(axis=1)
            xt = (self.x & tm).any(axis=1)
            self.e[xc & xt] += 2
            self.z[xc] ^= tm
            self.z[xt] ^= cm
            return
        (q,) = qubits
        m = self._mask([q])
        xq = (self.x & m).any(axis=1)
        zq = (self.z & m).any(axis=1)
        if name == "H":
            self.e[xq & zq] += 2
            xbits = self.x & m
            self.x = (self.x & ~m) | (self.z & m)
            self.z = (self.z & ~m) | xbits
        elif name == "S":
            self.e[xq] += 1
            self.z[xq] ^= m
        elif name == "SDG":
            self.e[xq] += 3
            self.z[xq] ^= m
        elif name == "SQRTX":
            self.e[zq] += 3
            self.x[zq] ^= m
        elif name == "SQRTXDG":
            self.e[zq] += 1
            self.x[zq] ^= m
        elif name == "X":
            self.e[zq] += 2
        elif name == "Y":
            self.e[xq ^ zq] += 2
        elif name == "Z":
            self.e[xq] += 2
        else:
            raise ValueError(f"unknown gate {name!r}")

    def apply_circuit(self, circuit: "CliffordCircuit") -> None:
        for name, qubits in circuit.gates:
            self.apply_gate(name, *qubits)

    # -- measurement -------------------------------------------------------
    def _anticommute_mask(self, px: np.ndarray, pz: np.ndarray) -> np.ndarray:
        cross = _popcount_rows(self.x & pz) + _popcount_rows(self.z & px)
        return (cross & 1).astype(bool)

    def _right_multiply(self, rows: np.ndarray, px, pz, pe) -> None:
        """rows <- rows * P for every selected row index."""
        sign_cross = _popcount_rows(self.z[rows] & px)
        self.e[rows] += pe + 2 * sign_cross
        self.x[rows] ^= px
        self.z[rows] ^= pz

    def measure_pauli(self, p: PauliString, rng: np.random.Generator) -> tuple[int, bool]:
        """Projective measurement of a Hermitian Pauli; returns (outcome, deterministic)."""
        if p.n != self.n:
            raise ValueError("size mismatch")
        if not p.is_hermitian:
            raise ValueError("measurement requires a Hermitian Pauli")
        px, pz, pe = self._pack(p.x), self._pack(p.z), p.e
        anti = self._anticommute_mask(px, pz)
        stab_anti = np.nonzero(anti[self.n :])[0]
        if stab_anti.size:
            pivot = self.n + int(stab_anti[0])
            others = np.nonzero(anti)[0]
            others = others[others != pivot]
            if others.size:
                rx, rz, re = self.x[pivot].copy(), self.z[pivot].copy(), int(self.e[pivot])
                sign_cross = _popcount_rows(self.z[others] & rx)
                self.e[others] += re + 2 * sign_cross
                self.x[others] ^= rx
                self.z[others] ^= rz
            outcome = 1 if rng.integers(2) == 0 else -1
            # pivot stabilizer becomes +-P; its old value is the new destabilizer
            dest = pivot - self.n
            self.x[dest] = self.x[pivot]
            self.z[dest] = self.z[pivot]
            self.e[dest] = self.e[pivot]
            self.x[pivot] = px
            self.z[pivot] = pz
            self.e[pivot] = pe + (0 if outcome == 1 else 2)
            self.e %= 4
            return outcome, False
        return self._deterministic_outcome(p), True

    def _deterministic_outcome(self, p: PauliString) -> int:
        px, pz = self._pack(p.x), self._pack(p.z)
        anti_dest = self._anticommute_mask(px, pz)[: self.n]
        acc = PauliString.identity(self.n)
        for i in np.nonzero(anti_dest)[0]:
            acc = pauli_mul(acc, self.row_pauli(self.n + int(i)))
        # acc equals +-P; compare phases
        if (acc.x, acc.z) != (p.x, p.z):
            raise RuntimeError("tableau inconsistency in deterministic measurement")
        delta = (acc.e - p.e) % 4
        if delta == 0:
            return 1
        if delta == 2:
            return -1
        raise RuntimeError("non-real measurement phase")  # pragma: no cover

    def expectation_pauli(self, p: PauliString) -> int:
        """Exact expectation of a Hermitian Pauli: -1, 0 or +1."""
        px, pz = self._pack(p.x), self._pack(p.z)
        if self._anticommute_mask(px, pz)[self.n :].any():
            return 0
        return self._deterministic_outcome(p)


# ---------------------------------------------------------------------------
# Circuits
# ---------------------------------------------------------------------------


@dataclass
class CliffordCircuit:
    """Flat gate list with layer boundaries (``layers[i]`` = start index of layer i)."""

    n: int
    gates: list = field(default_factory=list)
    layers: list = field(default_factory=lambda: [0])

    def add(self, name: str, *qubits: int) -> None:
        if any(not 0 <= q < self.n for q in qubits):
            raise IndexError("qubit index out of range")
        self.gates.append((name, tuple(qubits)))

    def new_layer(self) -> None:
        self.layers.append(len(self.gates))

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    def layer_gates(self, k: int) -> list:
        start = self.layers[k]
        end = self.layers[k + 1] if k + 1 < len(self.layers) else len(self.gates)
        return self.gates[start:end]

    def to_text(self) -> str:
        lines = []
        for k in range(self.num_layers):
            if k > 0:
                lines.append("LAYER")
            for name, qubits in self.layer_gates(k):
                lines.append(" ".join([name, *map(str, qubits)]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n: int) -> "CliffordCircuit":
        circ = cls(n)
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line == "LAYER":
                circ.new_layer()
                continue
            parts = line.split()
            circ.add(parts[0], *map(int, parts[1:]))
        return circ


def _enumerate_cliffords_1q() -> tuple[list[tuple[str, ...]], list[np.ndarray]]:
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    s = np.diag([1, 1j]).astype(complex)
    mats = {"H": h, "S": s}

    def key(u):
        # canonical up to global phase: first significant entry made positive real
        flat = u.reshape(-1)
        ref = flat[np.argmax(np.abs(flat) > 1e-9)]
        v = np.round(u / (ref / abs(ref)), 9) + 0.0  # fold -0.0 into +0.0
        return v.tobytes()

    seqs: list[tuple[str, ...]] = [()]
    unitaries = [np.eye(2, dtype=complex)]
    seen = {key(unitaries[0])}
    frontier = [((), np.eye(2, dtype=complex))]
    while len(seqs) < 24:
        nxt = []
        for seq, u in frontier:
            for gname in ("H", "S"):
                v = mats[gname] @ u
                k = key(v)
                if k not in seen:
                    seen.add(k)
                    seqs.append(seq + (gname,))
                    unitaries.append(v)
                    nxt.append((seq + (gname,), v))
        frontier = nxt
    return seqs, unitaries


CLIFFORD_1Q_SEQUENCES, CLIFFORD_1Q_UNITARIES = _enumerate_cliffords_1q()


def random_clifford_circuit(
    n: int = 100,
    layers: int = 100,
    cnots_per_layer: int = 50,
    rng: np.random.Generator | None = None,
) -> CliffordCircuit:
    """Layered random circuit: uniform 1q Cliffords on every qubit, then random CNOTs.

    CNOT endpoints are distinct within a pair; pairs may reuse qubits within
    one layer.
    """
    if n < 2:
        raise ValueError("need at least 2 qubits")
    rng = rng or np.random.default_rng()
    circ = CliffordCircuit(n)
    for layer in range(layers):
        if layer > 0:
            circ.new_layer()
        choices = rng.integers(0, 24, size=n)
        for q in range(n):
            for gname in CLIFFORD_1Q_SEQUENCES[int(choices[q])]:
                circ.add(gname, q)
        for _ in range(cnots_per_layer):
            c, t = rng.choice(n, size=2, replace=False)
            circ.add("CNOT", int(c), int(t))
    return circ


def deterministic_observable(circuit: CliffordCircuit, rng: np.random.Generator) -> PauliString:
    """A non-identity Pauli stabilizing the circuit's output state (+1 outcome)."""
    t = StabilizerTableau(circuit.n)
    t.apply_circuit(circuit)
    n = circuit.n
    while True:
        subset = np.nonzero(rng.integers(0, 2, size=n))[0]
        if subset.size:
            break
    acc = PauliString.identity(n)
    for i in subset:
        acc = pauli_mul(acc, t.row_pauli(n + int(i)))
    return acc


def backpropagate_observable(circuit: CliffordCircuit, p: PauliString) -> list[PauliString]:
    """Observable conjugated back to each layer boundary.

    ``result[k]`` is the observable as seen just after layer k-1 / before
    layer k's gates (``result[num_layers]`` is ``p`` itself), so a Pauli error
    inserted after layer k flips the final outcome iff it anticommutes with
    ``result[k+1]``.
    """
    out = [p]
    cur = p
    for k in reversed(range(circuit.num_layers)):
        for name, qubits in reversed(circuit.layer_gates(k)):
            cur = conjugate_by_gate(cur, _GATE_INVERSE[name], qubits)
        out.append(cur)
    out.reverse()
    return out


def outcome_flips(backprop: list[PauliString], layer: int, error: PauliString) -> bool:
    """Does a Pauli error injected after ``layer`` flip the final observable?"""
    return not commutes(error, backprop[layer + 1])
