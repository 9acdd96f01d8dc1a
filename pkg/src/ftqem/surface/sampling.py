"""Phenomenological-noise sampling for the surface-code Monte Carlo.

Noise model per shot over ``c`` cycles with perfect syndrome rounds 0 and c:

* at the beginning of every cycle 1..c each data qubit suffers single-qubit
  depolarizing noise of total strength p (X, Y, Z each with p/3);
* at rounds 1..c-1 each stabilizer outcome is flipped independently with
  probability 2p/3 (a depolarizing hit on the readout ancilla just before a
  Z-basis measurement flips the bit when its X component is nonzero).

The batch sampler produces detector events (XOR of consecutive syndrome
rounds) for both stabilizer types plus the crossing parities of the true
residual against the logical supports, which is all the decoder needs to
classify the shot's logical coset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..pauli import PauliString
from .layout import SurfaceCodeLayout


@dataclass
class SyndromeHistory:
    """Raw per-round stabilizer outcomes (rounds 0..cycles, both types)."""

    cycles: int
    z_rounds: np.ndarray  # (cycles+1, n_z) uint8
    x_rounds: np.ndarray  # (cycles+1, n_x) uint8

    def __post_init__(self):
        if self.z_rounds.shape[0] != self.cycles + 1:
            raise ValueError("round count must be cycles + 1")

    def detectors(self) -> tuple[np.ndarray, np.ndarray]:
        dz = self.z_rounds[1:] ^ self.z_rounds[:-1]
        dx = self.x_rounds[1:] ^ self.x_rounds[:-1]
        return dz, dx


@dataclass
class ShotBatch:
    """Vectorized sample of many shots (see sample_batch)."""

    detectors_z: np.ndarray  # (shots, cycles, n_z) uint8
    detectors_x: np.ndarray
    x_cross: np.ndarray  # (shots,) uint8: parity of X-support on the logical-Z column
    z_cross: np.ndarray  # (shots,) uint8: parity of Z-support on the logical-X row
    residual_x: np.ndarray | None = None  # (shots, n_data) optional full residuals
    residual_z: np.ndarray | None = None


def sample_batch(
    layout: SurfaceCodeLayout,
    p: float,
    shots: int,
    rng: np.random.Generator,
    cycles: int | None = None,
    keep_residuals: bool = False,
) -> ShotBatch:
    if not 0 <= p < 1:
        raise ValueError("p must be in [0, 1)")
    c = layout.d if cycles is None else cycles
    nd, nz, nx = layout.n_data, layout.n_z, layout.n_x

    u = rng.random(size=(shots, c, nd))
    x_comp = (u < 2 * p / 3).astype(np.int8)  # X or Y component
    z_comp = ((u >= p / 3) & (u < p)).astype(np.int8)  # Y or Z component

    # syndrome increments per cycle, accumulated over rounds
    inc_z = (x_comp.reshape(-1, nd) @ layout.adj_z).reshape(shots, c, nz)
    inc_x = (z_comp.reshape(-1, nd) @ layout.adj_x).reshape(shots, c, nx)
    synd_z = np.cumsum(inc_z, axis=1, dtype=np.int32) & 1
    synd_x = np.cumsum(inc_x, axis=1, dtype=np.int32) & 1

    if c > 1:
        flip_z = (rng.random(size=(shots, c - 1, nz)) < 2 * p / 3).astype(np.int32)
        flip_x = (rng.random(size=(shots, c - 1, nx)) < 2 * p / 3).astype(np.int32)
        synd_z[:, : c - 1] ^= flip_z
        synd_x[:, : c - 1] ^= flip_x

    det_z = synd_z.copy()
    det_z[:, 1:] ^= synd_z[:, :-1]
    det_x = synd_x.copy()
    det_x[:, 1:] ^= synd_x[:, :-1]

    x_cross = (x_comp[:, :, layout.logical_z_support].sum(axis=(1, 2)) & 1).astype(np.uint8)
    z_cross = (z_comp[:, :, layout.logical_x_support].sum(axis=(1, 2)) & 1).astype(np.uint8)

    res_x = res_z = None
    if keep_residuals:
        res_x = (x_comp.sum(axis=1) & 1).astype(np.uint8)
        res_z = (z_comp.sum(axis=1) & 1).astype(np.uint8)
    return ShotBatch(
        det_z.astype(np.uint8), det_x.astype(np.uint8), x_cross, z_cross, res_x, res_z
    )


def sample_run(
    layout: SurfaceCodeLayout, p: float, rng: np.random.Generator, cycles: int | None = None
) -> tuple[SyndromeHistory, PauliString]:
    """Single-shot sample returning the raw round history and the true residual."""
    c = layout.d if cycles is None else cycles
    batch = sample_batch(layout, p, 1, rng, cycles=c, keep_residuals=True)
    dz = batch.detectors_z[0]
    dx = batch.detectors_x[0]
    # rebuild raw rounds from detectors (round 0 is all zeros by construction)
    z_rounds = np.zeros((c + 1, layout.n_z), dtype=np.uint8)
    x_rounds = np.zeros((c + 1, layout.n_x), dtype=np.uint8)
    for r in range(1, c + 1):
        z_rounds[r] = z_rounds[r - 1] ^ dz[r - 1]
        x_rounds[r] = x_rounds[r - 1] ^ dx[r - 1]
    xmask = zmask = 0
    for q in range(layout.n_data):
        if batch.residual_x[0, q]:
            xmask |= 1 << q
        if batch.residual_z[0, q]:
            zmask |= 1 << q
    residual = PauliString(layout.n_data, xmask, zmask, bin(xmask & zmask).count("1"))
    return SyndromeHistory(c, z_rounds, x_rounds), residual
