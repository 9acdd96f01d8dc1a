"""Single-qubit Clifford+T synthesis and approximation-error channels.

Synthesis searches an exhaustive table of Matsumoto-Amano normal-form words
``[T?](HT|SHT)^j`` (T-count <= TABLE_T), quotiented by the 24 right-hand
Cliffords: a target is compared against word * C for all C by rotating the
target instead of enlarging the table.  Budgets above TABLE_T use a
two-table product search (word * short-word * C with the short word's
T-count <= MITM_T), which contains the plain table search as its t_A = 0
slice, so the reachable space is nested in the budget and the achieved
error is non-increasing.

Distances are phase-aligned operator norms: for 2x2 unitaries
``min_phi || e^{i phi} A - B || = sqrt(2 - |tr(A^dag B)| )`` after
normalizing both to SU(2).  The table scan maximizes the equivalent
quaternion overlap |<q_A, q_B>| in float32, then the few best candidates
are re-scored exactly in float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ptm import TransferMatrix, ptm_of_channel
from .quasiprob import QuasiDecomposition, decompose_inverse_1q
from .tableau import CLIFFORD_1Q_SEQUENCES, CLIFFORD_1Q_UNITARIES

TABLE_T = 16
MITM_T = 4
_REFINE = 24  # candidates re-scored exactly per budget group

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
_T = np.diag([np.exp(1j * np.pi / 8), np.exp(-1j * np.pi / 8)]).astype(complex)
_GATES = {"H": _H, "S": _S, "SDG": _S.conj().T, "T": _T, "TDG": _T.conj().T}
_SQRT_X = _H @ _S @ _H


def rz(theta: float) -> np.ndarray:
    """R_Z(theta) = exp(i theta Z / 2); R_Z(pi/4) is the T gate."""
    return np.diag([np.exp(1j * theta / 2), np.exp(-1j * theta / 2)])


def haar_random_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed SU(2) element via a normalized Gaussian quaternion."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [[w - 1j * z, -y - 1j * x], [y - 1j * x, w + 1j * z]], dtype=complex
    )


def _to_su2(u: np.ndarray) -> np.ndarray:
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    return u / np.sqrt(complex(det))


def _quaternion(u: np.ndarray) -> np.ndarray:
    """Unit quaternion (w, x, y, z) of an SU(2) matrix U = wI - i(xX + yY + zZ)."""
    v = _to_su2(u)
    return np.array(
        [v[0, 0].real, -v[0, 1].imag, -v[0, 1].real, -v[0, 0].imag], dtype=float
    )


def approx_error(u: np.ndarray, u_approx: np.ndarray) -> float:
    """Operator norm || u_approx - u || minimized over a global phase.

    For unitary input the optimum phase is the argument of tr(u^dag u~)
    (the circular midpoint of the eigenphases); the residual is then the
    larger eigenvalue distance, computed directly so exact matches come out
    at machine precision instead of the sqrt-amplified trace deficit.
    """
    w = np.asarray(u, dtype=complex).conj().T @ np.asarray(u_approx, dtype=complex)
    tr = w[0, 0] + w[1, 1]
    phase = tr / abs(tr) if abs(tr) > 1e-12 else 1.0
    lam = np.linalg.eigvals(w)
    return float(np.abs(lam - phase).max())


# ---------------------------------------------------------------------------
# Euler decomposition U ~ R_Z(t1) sqrtX R_Z(t2) sqrtX R_Z(t3)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EulerAngles:
    theta1: float
    theta2: float
    theta3: float

    def angles(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)

    def reconstruct(self) -> np.ndarray:
        return rz(self.theta1) @ _SQRT_X @ rz(self.theta2) @ _SQRT_X @ rz(self.theta3)


def _wrap(theta: float) -> float:
    out = (theta + np.pi) % (2 * np.pi) - np.pi
    return np.pi if out == -np.pi else float(out)


def euler_decompose(u: np.ndarray) -> EulerAngles:
    """Angles of the Z-sqrtX-Z-sqrtX-Z form, exact up to a global phase."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or np.abs(u @ u.conj().T - np.eye(2)).max() > 1e-10:
        raise ValueError("input is not a 2x2 unitary")
    v = _to_su2(u)
    # ZYZ Euler angles: V = Rz(alpha) Ry(beta) Rz(gamma), Ry(b) = exp(-i b Y / 2);
    # entries V00 = cos(b/2) e^{i(a+g)/2}, V10 = sin(b/2) e^{-i(a-g)/2}
    c = abs(v[0, 0])
    s = abs(v[1, 0])
    beta = 2.0 * math.atan2(s, c)
    if s < 1e-12:
        alpha = 2.0 * math.atan2(v[0, 0].imag, v[0, 0].real)
        gamma = 0.0
    elif c < 1e-12:
        alpha = -2.0 * math.atan2(v[1, 0].imag, v[1, 0].real)
        gamma = 0.0
    else:
        arg00 = math.atan2(v[0, 0].imag, v[0, 0].real)
        arg10 = math.atan2(v[1, 0].imag, v[1, 0].real)
        alpha = arg00 - arg10
        gamma = arg00 + arg10
    # Ry(b) = sqrtX Rz(b) sqrtX^-1 and sqrtX^-1 ~ Rz(pi) sqrtX Rz(pi)
    angles = EulerAngles(_wrap(alpha), _wrap(beta + np.pi), _wrap(gamma + np.pi))
    if approx_error(u, angles.reconstruct()) > 1e-10:
        raise RuntimeError("euler decomposition failed to reconstruct")
    return angles


# ---------------------------------------------------------------------------
# normal-form tables
# ---------------------------------------------------------------------------


class _WordTable:
    """All words [T?](HT|SHT)^j with T-count <= max_t, sorted by T-count.

    Entry provenance is (parent, code): code 1 appends HT, 2 appends SHT on
    the right; code 3 marks a leading T on the parent word.
    """

    def __init__(self, max_t: int):
        self.max_t = max_t
        ht = _H @ _T
        sht = _S @ ht
        mats = [np.eye(2, dtype=complex)]
        tcount = [0]
        parent = [-1]
        code = [0]
        level = [0]  # indices of the current no-leading-T level
        for t in range(1, max_t + 1):
            nxt = []
            for idx in level:
                for cd, g in ((1, ht), (2, sht)):
                    mats.append(mats[idx] @ g)
                    tcount.append(t)
                    parent.append(idx)
                    code.append(cd)
                    nxt.append(len(mats) - 1)
            # leading-T variants of the previous level's words
            for idx in level:
                mats.append(_T @ mats[idx])
                tcount.append(t)
                parent.append(idx)
                code.append(3)
            level = nxt
        order = np.argsort(np.array(tcount), kind="stable")
        self.mats = np.stack(mats)[order]
        self.tcount = np.array(tcount, dtype=np.int16)[order]
        self.parent_raw = np.array(parent, dtype=np.int64)
        self.code_raw = np.array(code, dtype=np.uint8)
        self.order = order
        self.quats = np.stack([_quaternion(m) for m in self.mats]).astype(np.float32)
        # limit[t]: number of rows with tcount <= t
        self.limit = np.searchsorted(self.tcount, np.arange(max_t + 2), side="right")

    def gates(self, row: int) -> list[str]:
        """Gate names in matrix order (leftmost factor first)."""
        idx = int(self.order[row])
        lead = []
        if self.code_raw[idx] == 3:
            lead = ["T"]
            idx = int(self.parent_raw[idx])
        syll = []
        while idx >= 0 and self.code_raw[idx] != 0:
            syll.append("HT" if self.code_raw[idx] == 1 else "SHT")
            idx = int(self.parent_raw[idx])
        out = list(lead)
        for s in reversed(syll):
            out.extend(s)
        return out


_word_tables: dict[int, _WordTable] = {}


def _table(max_t: int = TABLE_T) -> _WordTable:
    if max_t not in _word_tables:
        _word_tables[max_t] = _WordTable(max_t)
    return _word_tables[max_t]


class _SuffixSet:
    """Right-hand factors: short words (T-count <= MITM_T) times a Clifford."""

    def __init__(self):
        words = _table(MITM_T)
        mats, quats, tcount, prov = [], [], [], []
        for row in range(len(words.tcount)):
            wm = words.mats[row]
            for c in range(24):
                m = wm @ CLIFFORD_1Q_UNITARIES[c]
                mats.append(m)
                quats.append(_quaternion(m))
                tcount.append(int(words.tcount[row]))
                prov.append((row, c))
        self.mats = np.stack(mats)
        self.quats = np.stack(quats).astype(np.float32)
        self.tcount = np.array(tcount, dtype=np.int16)
        self.prov = prov
        self.words = words

    _instance = None

    @classmethod
    def instance(cls) -> "_SuffixSet":
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance


@dataclass
class CliffordTSequence:
    """Synthesized gate sequence with its cached product matrix.

    ``gates`` is in matrix order (first entry = leftmost factor); apply to a
    state in reverse order.
    """

    gates: list
    unitary: np.ndarray
    t_count: int = field(init=False)

    def __post_init__(self):
        self.t_count = sum(1 for g in self.gates if g in ("T", "TDG"))
        prod = np.eye(2, dtype=complex)
        for g in self.gates:
            prod = prod @ _GATES[g]
        if approx_error(prod, self.unitary) > 1e-9:
            raise ValueError("cached unitary inconsistent with gate list")

    def to_text(self) -> str:
        return "".join(g if g != "SDG" else "Sdg" for g in self.gates)


def synthesize_rz(theta: float, max_t: int) -> CliffordTSequence:
    """Best Clifford+T approximation of R_Z(theta) with at most max_t T gates.

    Deterministic: the scan order is fixed by the table build, and ties in
    the refined exact distance break toward lower T-count, then lower index.
    """
    if max_t < 0:
        raise ValueError("max_t must be >= 0")
    target = rz(theta)
    tq = _quaternion(target).astype(np.float32)
    words = _table()
    suffix = _SuffixSet.instance()

    cand: list[tuple[int, int]] = []
    for t_a in range(0, min(MITM_T, max_t) + 1):
        cols = np.nonzero(suffix.tcount == t_a)[0]
        rows_limit = int(words.limit[min(max_t - t_a, words.max_t)])
        if rows_limit == 0 or cols.size == 0:
            continue
        # overlap of word * suffix with the target: <q_w, q(target * suffix^dag)>
        rot = np.stack(
            [_quaternion(target @ suffix.mats[c].conj().T) for c in cols]
        ).astype(np.float32)
        col_best = np.empty(cols.size, dtype=np.float32)
        col_arg = np.empty(cols.size, dtype=np.int64)
        for lo in range(0, cols.size, 128):
            hi = min(lo + 128, cols.size)
            dots = np.abs(words.quats[:rows_limit] @ rot[lo:hi].T)
            col_best[lo:hi] = dots.max(axis=0)
            col_arg[lo:hi] = dots.argmax(axis=0)
        take = min(_REFINE, cols.size)
        top = np.argpartition(col_best, cols.size - take)[cols.size - take :]
        for j in top:
            cand.append((int(col_arg[j]), int(cols[j])))

    best = None
    for row, col in sorted(set(cand)):
        mat = words.mats[row] @ suffix.mats[col]
        err = approx_error(target, mat)
        # exact hits tie at machine precision; prefer the shorter sequence
        t_total = int(words.tcount[row]) + int(suffix.tcount[col])
        key = (err if err > 1e-12 else 0.0, t_total, row, col)
        if best is None or key < best[0]:
            best = (key, row, col, mat)
    _, row, col, mat = best
    srow, sc = suffix.prov[col]
    # the enumerated Clifford sequences are in application order; gate lists
    # here are in matrix order (leftmost factor first)
    cliff = list(reversed(CLIFFORD_1Q_SEQUENCES[sc]))
    gates = words.gates(row) + suffix.words.gates(srow) + cliff
    return CliffordTSequence(gates, mat)


@dataclass
class SynthesizedRotation:
    """A Haar rotation, its budgeted Clifford+T approximation and error channel."""

    target: np.ndarray
    approx: np.ndarray
    sequences: list
    t_count: int
    opnorm_error: float


def synthesize_unitary(u: np.ndarray, max_t_total: int) -> SynthesizedRotation:
    """Approximate a single-qubit unitary via its three-rotation form.

    The T budget is split evenly over the three Z rotations.
    """
    angles = euler_decompose(u)
    per = max_t_total // 3
    seqs = [synthesize_rz(t, per) for t in angles.angles()]
    approx = seqs[0].unitary @ _SQRT_X @ seqs[1].unitary @ _SQRT_X @ seqs[2].unitary
    return SynthesizedRotation(
        np.asarray(u, dtype=complex),
        approx,
        seqs,
        sum(s.t_count for s in seqs),
        approx_error(u, approx),
    )


# ---------------------------------------------------------------------------
# approximation-error channels and their mitigation cost
# ---------------------------------------------------------------------------


@dataclass
class ApproxErrorChannel:
    source: np.ndarray
    approx: np.ndarray
    ptm: TransferMatrix
    opnorm_error: float


def error_channel(u: np.ndarray, u_approx: np.ndarray) -> ApproxErrorChannel:
    """Coherent error map rho -> (U~ U^dag) rho (U~ U^dag)^dag of an approximation."""
    w = np.asarray(u_approx, dtype=complex) @ np.asarray(u, dtype=complex).conj().T
    m = ptm_of_channel(w, 1)
    if np.abs(m.mat @ m.mat.T - np.eye(4)).max() > 1e-10:
        raise ValueError("approximation error channel is not orthogonal")
    return ApproxErrorChannel(u, u_approx, m, approx_error(u, u_approx))


def mitigate_sk(errch: ApproxErrorChannel) -> QuasiDecomposition:
    """Quasi-probability decomposition of the inverse approximation error."""
    inverse = TransferMatrix(1, errch.ptm.mat.T)
    return decompose_inverse_1q(inverse)


@dataclass
class GammaFit:
    beta1: float
    beta2: float
    beta1_stderr: float
    beta2_stderr: float
    r_squared: float
    n_points: int


def fit_gamma_vs_t(samples) -> GammaFit:
    """Least squares of log(gamma - 1) against the T count.

    ``samples`` is an iterable of (n_t, gamma); entries with gamma at the
    numerical floor are dropped.
    """
    xs, ys = [], []
    for n_t, gamma in samples:
        if gamma - 1.0 > 1e-14:
            xs.append(float(n_t))
            ys.append(math.log(gamma - 1.0))
    if len(set(xs)) < 3:
        raise ValueError("need at least 3 distinct T counts with gamma > 1")
    xs = np.array(xs)
    ys = np.array(ys)
    (slope, intercept), cov = np.polyfit(xs, ys, 1, cov=True)
    fitted = intercept + slope * xs
    ss_res = float(np.sum((ys - fitted) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    beta1 = math.exp(intercept)
    return GammaFit(
        beta1,
        -float(slope),
        beta1 * math.sqrt(cov[1, 1]),
        math.sqrt(cov[0, 0]),
        r2,
        len(xs),
    )
