"""Pauli-frame engine with quasi-probability bookkeeping.

Executes logical programs over a pluggable backend while tracking the
classical frame, the accumulated mitigation cost and the sign parity.  Each
noisy logical operation applies the ideal gate plus a sampled Pauli from its
noise channel on the backend (the uncorrected device process); the sampled
recovery Pauli never touches the device — it multiplies the frame, flips the
parity by the coefficient sign and scales the running cost by the channel's
inversion cost.  Measurement outcomes are reinterpreted through the frame's
X-part mask, and a completed shot contributes ``gamma * parity * outcome``.

Logical program text format (one op per line)::

    INIT0 0        # add a |0> logical qubit
    INITA 2        # add a magic-state qubit (consumed by TGATE)
    H 0 / S 0 / SDG 0 / X 0 / Y 0 / Z 0 / SQRTX 0
    CNOT 0 1 / CZ 0 1
    TGATE 0 2      # teleported T on qubit 0 consuming magic qubit 2
    PAULI_SW XZI   # software Pauli (frame update only)
    PAULI_HW XZI   # hardware Pauli (device update)
    MZ 0           # destructive logical Z measurement

A sidecar noise spec binds one single-qubit Pauli channel per op kind
("init", "clifford", "measure", "magic"); see :func:`load_noise_spec`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .dense import DenseState
from .pauli import PauliString, conjugate_by_gate, pauli_mul
from .ptm import TransferMatrix, ptm_of_pauli
from .quasiprob import PauliChannel, QuasiDecomposition, commutation_transform, invert_pauli_channel
from .tableau import StabilizerTableau

_CLIFFORD_GATES = ("H", "S", "SDG", "SQRTX", "X", "Y", "Z", "CNOT", "CZ")

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
_T = np.diag([np.exp(1j * np.pi / 8), np.exp(-1j * np.pi / 8)]).astype(complex)
_GATE_MATS = {
    "H": _H,
    "S": _S,
    "SDG": _S.conj().T,
    "SQRTX": _H @ _S @ _H,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "CZ": np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex),
}


class DenseBackend:
    """Exact state-vector device (supports magic states and the T teleport)."""

    def __init__(self, n: int):
        self.n = n
        self.state = DenseState(n)

    def apply_gate(self, name: str, qubits) -> None:
        self.state.apply_unitary(_GATE_MATS[name], list(qubits))

    def apply_pauli(self, p: PauliString) -> None:
        self.state.apply_pauli(p)

    def prepare_magic(self, q: int) -> None:
        self.apply_gate("H", (q,))
        self.state.apply_unitary(_T, [q])

    def measure_z(self, q: int, rng) -> int:
        return self.state.measure_z(q, rng)


class StabilizerBackend:
    """Tableau device for Clifford-only programs (no magic-state support)."""

    def __init__(self, n: int):
        self.n = n
        self.state = StabilizerTableau(n)

    def apply_gate(self, name: str, qubits) -> None:
        self.state.apply_gate(name, *qubits)

    def apply_pauli(self, p: PauliString) -> None:
        for q in range(self.n):
            code = p.restricted_letter_index(q)
            if code:
                self.state.apply_gate("IXYZ"[code], q)

    def prepare_magic(self, q: int) -> None:
        raise NotImplementedError("stabilizer backend cannot prepare magic states")

    def measure_z(self, q: int, rng) -> int:
        out, _ = self.state.measure_pauli(PauliString.single(self.n, q, "Z"), rng)
        return out


@dataclass
class LogicalOpSpec:
    """A noisy logical operation: kind, targets, channel and its inversion.

    With ``mitigate=False`` the channel is still sampled onto the device but
    no recovery is drawn (the biased baseline).
    """

    kind: str
    targets: tuple
    channel: PauliChannel | None = None
    decomposition: QuasiDecomposition | None = None
    mitigate: bool = True

    def __post_init__(self):
        if self.channel is not None and self.decomposition is None:
            self.decomposition = invert_pauli_channel(self.channel)
        if self.channel is not None:
            lam = self.channel.ptm_diagonal()
            inv = np.zeros(4**self.channel.n)
            for eta, op in zip(self.decomposition.etas, self.decomposition.ops):
                from .ptm import pauli_index

                inv[pauli_index(op)] += eta
            resid = np.abs(commutation_transform(inv, self.channel.n) * lam - 1.0).max()
            if resid > 1e-9:
                raise ValueError("decomposition does not invert the attached channel")


@dataclass
class FrameState:
    """Per-shot bundle: frame Pauli, accumulated cost, sign parity, history."""

    n: int
    backend: object
    frame: PauliString = field(init=False)
    gamma_acc: float = 1.0
    parity: int = 1
    history: list | None = None

    def __post_init__(self):
        self.frame = PauliString.identity(self.n)

    # -- internal noise/recovery sampling ---------------------------------
    def _embed(self, p: PauliString, targets) -> PauliString:
        x = z = 0
        for local_q, q in enumerate(targets):
            if (p.x >> local_q) & 1:
                x |= 1 << q
            if (p.z >> local_q) & 1:
                z |= 1 << q
        return PauliString(self.n, x, z, bin(x & z).count("1"))

    def _apply_noise_and_recovery(self, op: LogicalOpSpec, rng, record=None) -> None:
        if op.channel is None:
            return
        cum, idx = op.channel.sampling_table()
        g_idx = int(idx[np.searchsorted(cum, rng.random())])
        if g_idx:
            from .ptm import pauli_from_index

            g = self._embed(pauli_from_index(op.channel.n, g_idx), op.targets)
            self.backend.apply_pauli(g)
        if not op.mitigate:
            return
        dec = op.decomposition
        i = int(np.searchsorted(dec.sampling_table(), rng.random()))
        rec = dec.ops[i]
        if not isinstance(rec, PauliString):
            raise TypeError("frame recovery operations must be Pauli")
        self.frame = pauli_mul(self._embed(rec, op.targets), self.frame)
        self.parity *= int(dec.signs[i])
        self.gamma_acc *= dec.gamma
        if self.history is not None:
            self.history.append((op.kind, op.targets, g_idx, i, record))

    # -- logical operations -------------------------------------------------
    def apply_pauli_software(self, p: PauliString) -> None:
        self.frame = pauli_mul(p, self.frame)

    def apply_pauli_hardware(self, p: PauliString, op: LogicalOpSpec | None = None, rng=None) -> None:
        self.backend.apply_pauli(p)
        if op is not None:
            self._apply_noise_and_recovery(op, rng)

    def init_zero(self, q: int, op: LogicalOpSpec | None = None, rng=None) -> None:
        # backend qubits start in |0>; initialization noise still applies
        if op is not None:
            self._apply_noise_and_recovery(op, rng)

    def init_magic(self, q: int, op: LogicalOpSpec | None = None, rng=None) -> None:
        self.backend.prepare_magic(q)
        if op is not None:
            self._apply_noise_and_recovery(op, rng)

    def apply_clifford(self, name: str, qubits, op: LogicalOpSpec | None = None, rng=None) -> None:
        if name not in _CLIFFORD_GATES:
            raise ValueError(f"unknown Clifford gate {name!r}")
        self.backend.apply_gate(name, qubits)
        self.frame = conjugate_by_gate(self.frame, name, tuple(qubits))
        if op is not None:
            self._apply_noise_and_recovery(op, rng)

    def measure_logical_z(self, q: int, rng, op: LogicalOpSpec | None = None) -> int:
        if op is not None:
            self._apply_noise_and_recovery(op, rng)
        raw = self.backend.measure_z(q, rng)
        flip = (self.frame.x >> q) & 1
        # discard the measured qubit's frame entries
        keep = ~(1 << q)
        self.frame = PauliString(
            self.n,
            self.frame.x & keep,
            self.frame.z & keep,
            bin(self.frame.x & keep & self.frame.z & keep).count("1"),
        )
        return -raw if flip else raw

    def teleport_t(self, q: int, magic_q: int, op: LogicalOpSpec | None = None, rng=None) -> None:
        """Consume a magic qubit to enact T on ``q`` with an adaptive S fix-up.

        The measured bit is corrected through the frame's mask on the
        consumed register before deciding the conditional S.
        """
        self.backend.prepare_magic(magic_q)
        self.backend.apply_gate("CNOT", (q, magic_q))
        self.frame = conjugate_by_gate(self.frame, "CNOT", (q, magic_q))
        if op is not None:
            self._apply_noise_and_recovery(op, rng)
        y = (self.frame.x >> magic_q) & 1
        raw = self.backend.measure_z(magic_q, rng)
        x = 0 if raw == 1 else 1
        f = x ^ y
        keep = ~(1 << magic_q)
        frame = PauliString(
            self.n, self.frame.x & keep, self.frame.z & keep,
            bin(self.frame.x & keep & self.frame.z & keep).count("1"),
        )
        if f:
            # outcome 1 leaves T^dag |psi>; exp(i pi Z / 4) (= standard S^dag)
            # promotes it to T |psi>
            self.backend.apply_gate("SDG", (q,))
            frame = conjugate_by_gate(frame, "SDG", (q,))
        self.frame = frame

    def mitigated_outcome(self, raw: int) -> float:
        return self.gamma_acc * self.parity * raw


def twirl_channel(noise: TransferMatrix, pauli_set=None) -> PauliChannel:
    """Average P N P over a Pauli set; the full set projects onto the diagonal."""
    n = noise.n
    if pauli_set is None:
        from .ptm import pauli_from_index

        pauli_set = [pauli_from_index(n, i) for i in range(4**n)]
    acc = np.zeros_like(noise.mat)
    for p in pauli_set:
        m = ptm_of_pauli(p).mat
        acc += m @ noise.mat @ m
    acc /= len(pauli_set)
    diag = np.diag(acc)
    off = np.abs(acc - np.diag(diag)).max()
    if off > 1e-10:
        raise ValueError(f"twirled channel is not diagonal (off-diagonal {off:.2e})")
    probs = commutation_transform(diag, n) / 4**n
    probs = np.clip(probs, 0.0, None)
    return PauliChannel(n, probs / probs.sum())


# ---------------------------------------------------------------------------
# program parsing and execution
# ---------------------------------------------------------------------------


@dataclass
class LogicalProgram:
    n: int
    ops: list  # (kind, payload)

    @classmethod
    def from_text(cls, text: str, n: int) -> "LogicalProgram":
        ops = []
        for raw in text.splitlines():
            line = raw.split("#")[0].strip()
            if not line:
                continue
            parts = line.split()
            name = parts[0].upper()
            if name in ("INIT0", "INITA", "MZ"):
                ops.append((name, (int(parts[1]),)))
            elif name == "TGATE":
                ops.append((name, (int(parts[1]), int(parts[2]))))
            elif name in ("PAULI_SW", "PAULI_HW"):
                ops.append((name, parts[1]))
            elif name in _CLIFFORD_GATES:
                ops.append((name, tuple(int(x) for x in parts[1:])))
            else:
                raise ValueError(f"unknown op {name!r}")
        return cls(n, ops)

    def to_text(self) -> str:
        lines = []
        for kind, payload in self.ops:
            if isinstance(payload, str):
                lines.append(f"{kind} {payload}")
            else:
                lines.append(" ".join([kind, *map(str, payload)]))
        return "\n".join(lines) + "\n"


def load_noise_spec(text: str) -> dict:
    """Parse the sidecar noise spec: op kind -> PauliChannel (JSON)."""
    data = json.loads(text)
    out = {}
    for kind, probs in data.items():
        if kind not in ("init", "clifford", "measure", "magic"):
            raise ValueError(f"unknown op kind {kind!r}")
        out[kind] = PauliChannel.from_xyz(
            float(probs["p_x"]), float(probs["p_y"]), float(probs["p_z"])
        )
    return out


_KIND_OF_OP = {"INIT0": "init", "INITA": "magic", "MZ": "measure", "TGATE": "magic"}


def run_program(
    program: LogicalProgram,
    rng: np.random.Generator,
    noise: dict | None = None,
    backend: object | None = None,
    mitigate: bool = True,
) -> tuple[float, int, "FrameState"]:
    """One shot; returns (mitigated value, raw outcome, final state).

    The last MZ drives the outcome.  With ``mitigate=False`` the sampled
    noise stream is preserved but no recovery is drawn (biased baseline).
    """
    noise = noise or {}
    backend = backend or DenseBackend(program.n)
    fs = FrameState(program.n, backend)

    def op_for(kind_key, targets):
        ch = noise.get(kind_key)
        if ch is None:
            return None
        if ch.n == 1 and len(targets) == 2:
            ch = ch.tensor(ch)
        return LogicalOpSpec(kind_key, tuple(targets), ch, mitigate=mitigate)

    raw = 1
    for kind, payload in program.ops:
        if kind == "INIT0":
            fs.init_zero(payload[0], op_for("init", payload), rng)
        elif kind == "INITA":
            fs.init_magic(payload[0], op_for("magic", payload), rng)
        elif kind == "TGATE":
            fs.teleport_t(payload[0], payload[1], op_for("magic", payload), rng)
        elif kind == "MZ":
            raw = fs.measure_logical_z(payload[0], rng, op_for("measure", payload))
        elif kind == "PAULI_SW":
            fs.apply_pauli_software(PauliString.from_label(payload))
        elif kind == "PAULI_HW":
            fs.apply_pauli_hardware(PauliString.from_label(payload))
        else:
            fs.apply_clifford(kind, payload, op_for("clifford", payload), rng)
    return fs.mitigated_outcome(raw), raw, fs
