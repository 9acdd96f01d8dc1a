"""Logical-channel estimation, threshold scans and the Markovianity fit.

Shots are processed in fixed-size batches; batch ``b`` of a given
(d, p, cycles) point draws from its own seed stream, so results are
bit-identical for any worker count and aggregation order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from multiprocessing import Pool

import numpy as np

from .decoder import decode_batch
from .layout import SurfaceCodeLayout
from .sampling import sample_batch

DEFAULT_BATCH = 8192


@lru_cache(maxsize=8)
def _layout(d: int) -> SurfaceCodeLayout:
    return SurfaceCodeLayout(d)


def _point_seed(seed: int, d: int, p: float, cycles: int, batch: int) -> np.random.Generator:
    pbits = np.frombuffer(np.float64(p).tobytes(), dtype=np.uint32)
    ss = np.random.SeedSequence(
        entropy=seed, spawn_key=(d, cycles, int(pbits[0]), int(pbits[1]), batch)
    )
    return np.random.default_rng(ss)


def _count_batch(args) -> np.ndarray:
    d, p, cycles, shots, seed, batch_idx = args
    layout = _layout(d)
    rng = _point_seed(seed, d, p, cycles, batch_idx)
    batch = sample_batch(layout, p, shots, rng, cycles=cycles)
    fx, fz = decode_batch(layout, batch)
    counts = np.zeros(4, dtype=np.int64)  # I, X, Y, Z cosets
    cls = fx.astype(np.int64) + 2 * fz.astype(np.int64)  # 0:I 1:X 2:Z 3:Y
    counts[0] = int(np.count_nonzero(cls == 0))
    counts[1] = int(np.count_nonzero(cls == 1))
    counts[3] = int(np.count_nonzero(cls == 2))
    counts[2] = int(np.count_nonzero(cls == 3))
    return counts


@dataclass
class LogicalChannelEstimate:
    d: int
    p: float
    cycles: int
    shots: int
    counts: np.ndarray  # I, X, Y, Z

    @property
    def probs(self) -> np.ndarray:
        return self.counts / self.shots

    @property
    def p_i(self) -> float:
        return float(self.probs[0])

    @property
    def p_x(self) -> float:
        return float(self.probs[1])

    @property
    def p_y(self) -> float:
        return float(self.probs[2])

    @property
    def p_z(self) -> float:
        return float(self.probs[3])

    @property
    def p_total(self) -> float:
        return 1.0 - self.p_i

    def stderr(self, which: int) -> float:
        p = self.counts[which] / self.shots
        return math.sqrt(max(p * (1 - p), 1e-300) / self.shots)

    @property
    def se_x(self) -> float:
        return self.stderr(1)

    @property
    def se_y(self) -> float:
        return self.stderr(2)

    @property
    def se_z(self) -> float:
        return self.stderr(3)

    def ptm_diagonal(self) -> np.ndarray:
        """Diagonal (1, lam_X, lam_Y, lam_Z) of the estimated logical channel."""
        pi, px, py, pz = self.probs
        return np.array(
            [1.0, pi + px - py - pz, pi - px + py - pz, pi - px - py + pz]
        )

    def per_cycle_probs(self) -> np.ndarray:
        """Effective per-cycle coset probabilities.

        The tallies cover ``cycles`` rounds; taking the cycle-th root of the
        channel's PTM diagonal gives the effective single-cycle channel
        (the per-cycle view behind the reported idle-channel strengths).
        """
        lam = self.ptm_diagonal()
        if lam.min() <= 0:
            raise ValueError("channel too noisy to extract a per-cycle root")
        lam_eff = lam ** (1.0 / self.cycles)
        from ..quasiprob import commutation_transform

        return commutation_transform(lam_eff, 1) / 4.0

    def per_cycle_stderr(self, which: int) -> float:
        """Delta-method error of a per-cycle probability (dominated by 1/cycles)."""
        return self.stderr(which) / self.cycles


def _run_batches(d, p, cycles, shots, seed, workers, batch_size) -> np.ndarray:
    n_batches = (shots + batch_size - 1) // batch_size
    jobs = [
        (d, p, cycles, min(batch_size, shots - b * batch_size), seed, b)
        for b in range(n_batches)
    ]
    if workers <= 1 or n_batches == 1:
        parts = [_count_batch(j) for j in jobs]
    else:
        with Pool(workers) as pool:
            parts = pool.map(_count_batch, jobs, chunksize=1)
    return np.sum(parts, axis=0)


def estimate_logical_channel(
    d: int,
    p: float,
    shots: int,
    seed: int = 0,
    cycles: int | None = None,
    workers: int = 1,
    batch_size: int = DEFAULT_BATCH,
) -> LogicalChannelEstimate:
    """Monte Carlo estimate of the logical Pauli channel after ``cycles`` rounds."""
    if shots < 1:
        raise ValueError("shots must be positive")
    cycles = d if cycles is None else cycles
    counts = _run_batches(d, p, cycles, shots, seed, workers, batch_size)
    return LogicalChannelEstimate(d, p, cycles, shots, counts)


def threshold_scan(
    distances,
    ps,
    shots: int,
    seed: int = 0,
    workers: int = 1,
    batch_size: int = DEFAULT_BATCH,
) -> list[LogicalChannelEstimate]:
    if not len(distances) or not len(ps):
        raise ValueError("empty scan grid")
    out = []
    for d in distances:
        for p in ps:
            out.append(
                estimate_logical_channel(
                    d, float(p), shots, seed=seed, workers=workers, batch_size=batch_size
                )
            )
    return out


def scan_to_csv(estimates, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["d", "p", "shots", "p_I", "p_X", "p_Y", "p_Z", "se_X", "se_Y", "se_Z"]
        )
        for e in estimates:
            writer.writerow(
                [e.d, e.p, e.shots, e.p_i, e.p_x, e.p_y, e.p_z, e.se_x, e.se_y, e.se_z]
            )


def locate_crossings(estimates) -> list[tuple[int, int, float]]:
    """Crossing points of total-logical-error curves for consecutive distances.

    Returns (d1, d2, p_cross) via linear interpolation on the scan grid.
    """
    by_d: dict[int, list] = {}
    for e in estimates:
        by_d.setdefault(e.d, []).append(e)
    for rows in by_d.values():
        rows.sort(key=lambda e: e.p)
    ds = sorted(by_d)
    crossings = []
    for d1, d2 in zip(ds, ds[1:]):
        rows1, rows2 = by_d[d1], by_d[d2]
        ps = [e.p for e in rows1]
        diff = [r2.p_total - r1.p_total for r1, r2 in zip(rows1, rows2)]
        for i in range(len(ps) - 1):
            if diff[i] < 0 <= diff[i + 1] or diff[i] >= 0 > diff[i + 1]:
                t = diff[i] / (diff[i] - diff[i + 1])
                crossings.append((d1, d2, ps[i] + t * (ps[i + 1] - ps[i])))
                break
    return crossings


@dataclass
class SuppressionFit:
    """Exponential suppression of the logical rate in the code distance.

    Linear fit of log p against (d+1)/2, the subthreshold scaling exponent.
    """

    slope: float
    intercept: float
    ratio: float  # decay factor per unit of (d+1)/2, i.e. per two distance steps

    def extrapolate(self, d: int) -> float:
        return math.exp(self.intercept + self.slope * (d + 1) / 2)


def fit_suppression(ds, rates) -> SuppressionFit:
    xs = np.array([(d + 1) / 2 for d in ds], dtype=float)
    ys = np.log(np.asarray(rates, dtype=float))
    slope, intercept = np.polyfit(xs, ys, 1)
    return SuppressionFit(float(slope), float(intercept), float(math.exp(slope)))


# ---------------------------------------------------------------------------
# Markovianity of the per-cycle logical channel
# ---------------------------------------------------------------------------


@dataclass
class MarkovianityResult:
    d: int
    p: float
    cycles: list
    estimates: list
    lam_x: np.ndarray  # diagonal PTM entry for X at each cycle count
    lam_y: np.ndarray
    lam_z: np.ndarray
    fit_cycles_used: list = field(default_factory=list)
    lam_eff_x: float = math.nan  # per-cycle decay from the exponential fit
    lam_eff_z: float = math.nan
    r_squared_x: float = math.nan
    r_squared_z: float = math.nan

    def lam_stderr(self, which: str, i: int) -> float:
        e = self.estimates[i]
        # lam = 1 - 2(q1 + q2): propagate the binomial error of q1 + q2
        pair = {"x": (2, 3), "y": (1, 3), "z": (1, 2)}[which]
        q = (e.counts[pair[0]] + e.counts[pair[1]]) / e.shots
        return 2.0 * math.sqrt(max(q * (1 - q), 1e-300) / e.shots)


def _loglinear_fit(cs, lams):
    xs = np.asarray(cs, dtype=float)
    ys = np.log(np.asarray(lams, dtype=float))
    slope, intercept = np.polyfit(xs, ys, 1)
    fitted = intercept + slope * xs
    ss_res = float(np.sum((ys - fitted) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return math.exp(slope), r2


def markovianity_fit(
    d: int,
    p: float,
    cycle_list,
    shots: int,
    seed: int = 0,
    workers: int = 1,
    fit_min_cycles: int = 20,
    batch_size: int = DEFAULT_BATCH,
) -> MarkovianityResult:
    """Per-cycle-count channel diagonals and the exponential-decay fit.

    Fitting uses the cycle counts strictly above ``fit_min_cycles``, where the
    per-cycle channel has converged to its effective value.
    """
    if any(c < 1 for c in cycle_list):
        raise ValueError("cycle counts must be >= 1")
    estimates = [
        estimate_logical_channel(
            d, p, shots, seed=seed, cycles=int(c), workers=workers, batch_size=batch_size
        )
        for c in cycle_list
    ]
    diags = np.stack([e.ptm_diagonal() for e in estimates])
    result = MarkovianityResult(
        d, p, list(cycle_list), estimates, diags[:, 1], diags[:, 2], diags[:, 3]
    )
    used = [i for i, c in enumerate(cycle_list) if c > fit_min_cycles]
    if len(used) >= 2:
        cs = [cycle_list[i] for i in used]
        result.fit_cycles_used = list(cs)
        result.lam_eff_x, result.r_squared_x = _loglinear_fit(cs, result.lam_x[used])
        result.lam_eff_z, result.r_squared_z = _loglinear_fit(cs, result.lam_z[used])
    return result
