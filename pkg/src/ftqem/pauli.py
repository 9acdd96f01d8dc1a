"""Signed n-qubit Pauli operators with exact phase arithmetic.

Encoding
--------
A Pauli operator is stored as ``i**e * X^x * Z^z`` where ``x`` and ``z`` are
n-bit integers (bit q set means an X/Z factor on qubit q) and ``e`` is the
exponent of the imaginary unit, kept modulo 4 so phases never drift.  The
conventional single-qubit letters are recovered through ``Y = i X Z``:

    (x_q, z_q) = (0,0) -> I,  (1,0) -> X,  (1,1) -> Y,  (0,1) -> Z

Qubit 0 is the leftmost letter in string labels and the most significant
factor in Kronecker products; all modules share this ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PAULI_MATS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_LETTERS = "IXYZ"
# (x, z) bit pair for each letter index I, X, Y, Z.
_LETTER_BITS = ((0, 0), (1, 0), (1, 1), (0, 1))


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """Immutable signed Pauli operator ``i**e * X^x * Z^z`` on ``n`` qubits."""

    n: int
    x: int
    z: int
    e: int = 0

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("mask has bits outside the qubit register")
        object.__setattr__(self, "e", self.e % 4)

    # -- constructors ---------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels like ``"XIZ"``, ``"-YY"`` or ``"+iXZ"``."""
        sign_e = 0
        body = label
        if body.startswith("+"):
            body = body[1:]
        elif body.startswith("-"):
            sign_e = 2
            body = body[1:]
        if body.startswith("i"):
            sign_e += 1
            body = body[1:]
        x = z = 0
        for q, ch in enumerate(body):
            try:
                idx = _LETTERS.index(ch)
            except ValueError:
                raise ValueError(f"bad Pauli letter {ch!r} in {label!r}") from None
            bx, bz = _LETTER_BITS[idx]
            x |= bx << q
            z |= bz << q
        n = len(body)
        # letter form carries i^{|x & z|} relative to the X^x Z^z form
        return cls(n, x, z, (sign_e + _popcount(x & z)) % 4)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        idx = _LETTERS.index(letter)
        bx, bz = _LETTER_BITS[idx]
        return cls(n, bx << qubit, bz << qubit, (bx & bz))

    # -- basic queries ---------------------------------------------------
    def letter(self, q: int) -> str:
        bx = (self.x >> q) & 1
        bz = (self.z >> q) & 1
        return _LETTERS[_LETTER_BITS.index((bx, bz))]

    @property
    def phase(self) -> complex:
        """Phase relative to the Hermitian letter product (one of 1, i, -1, -i)."""
        return 1j ** ((self.e - _popcount(self.x & self.z)) % 4)

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0 and self.e == 0

    @property
    def is_hermitian(self) -> bool:
        return (self.e - _popcount(self.x & self.z)) % 2 == 0

    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def hermitian(self) -> "PauliString":
        """Same letters with phase reset to +1."""
        return PauliString(self.n, self.x, self.z, _popcount(self.x & self.z))

    # -- algebra ----------------------------------------------------------
    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.e + 2)

    def restricted_letter_index(self, q: int) -> int:
        """Letter index (0..3) at qubit ``q``, ignoring the global phase."""
        return _LETTER_BITS.index((((self.x >> q) & 1), ((self.z >> q) & 1)))

    def to_matrix(self) -> np.ndarray:
        """Dense matrix; qubit 0 is the most significant Kronecker factor."""
        if self.n > 12:
            raise ValueError("dense conversion capped at 12 qubits")
        m = np.ones((1, 1), dtype=complex)
        for q in range(self.n):
            m = np.kron(m, _PAULI_MATS[self.restricted_letter_index(q)])
        return self.phase * m

    def label(self) -> str:
        pre = {1: "+", 1j: "+i", -1: "-", -1j: "-i"}[complex(self.phase)]
        return pre + "".join(self.letter(q) for q in range(self.n))

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return self.label()


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Group product ``a * b`` with the exact phase."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} != {b.n}")
    # X^xa Z^za X^xb Z^zb = (-1)^{za . xb} X^(xa^xb) Z^(za^zb)
    e = a.e + b.e + 2 * _popcount(a.z & b.x)
    return PauliString(a.n, a.x ^ b.x, a.z ^ b.z, e)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic inner product of the masks is even."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} != {b.n}")
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


def conjugate_by_gate(p: PauliString, gate: str, qubits: tuple[int, ...]) -> PauliString:
    """Return ``C p C^dagger`` for a named Clifford gate.

    Supported gates: H, S, SDG, X, Y, Z, SQRTX (= H S H up to phase), CNOT, CZ.
    """
    x, z, e = p.x, p.z, p.e
    if gate == "CNOT":
        c, t = qubits
        cb, tb = 1 << c, 1 << t
        if x & cb:
            x ^= tb
        if z & tb:
            z ^= cb
        return PauliString(p.n, x, z, e)
    if gate == "CZ":
        c, t = qubits
        cb, tb = 1 << c, 1 << t
        # X_c -> X_c Z_t, X_t -> Z_c X_t; sign flip on X_c X_t-type supports
        if (x & cb) and (x & tb):
            e += 2
        if x & cb:
            z ^= tb
        if x & tb:
            z ^= cb
        return PauliString(p.n, x, z, e)
    (q,) = qubits
    m = 1 << q
    if gate == "H":
        e += 2 * _popcount(x & z & m)
        xm, zm = x & m, z & m
        x, z = (x & ~m) | zm, (z & ~m) | xm
    elif gate == "S":
        e += _popcount(x & m)
        z ^= x & m
    elif gate == "SDG":
        e += 3 * _popcount(x & m)
        z ^= x & m
    elif gate == "SQRTX":
        # sqrt(X): Z -> -Y, Y -> Z, X -> X
        e += 3 * _popcount(z & m)
        x ^= z & m
    elif gate == "X":
        e += 2 * _popcount(z & m)
    elif gate == "Y":
        e += 2 * _popcount((x ^ z) & m)
    elif gate == "Z":
        e += 2 * _popcount(x & m)
    else:
        raise ValueError(f"unknown gate {gate!r}")
    return PauliString(p.n, x, z, e)


def random_hermitian_pauli(n: int, rng: np.random.Generator, allow_identity: bool = True) -> PauliString:
    while True:
        x = int(rng.integers(0, 1 << n))
        z = int(rng.integers(0, 1 << n))
        if allow_identity or x or z:
            return PauliString(n, x, z, _popcount(x & z))
