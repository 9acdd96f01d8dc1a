"""Minimum-weight perfect matching decoding of surface-code detector events.

The X- and Z-type detector graphs are matched independently (a Pauli-Y data
error feeds a defect pair into each graph; the correlation is ignored, which
is the standard MWPM approximation).  Edge weights are space-time Manhattan
distances; each defect may alternatively terminate at its nearest rough
boundary.  The logical coset of a shot follows from two parities per graph:
the true error's crossings of the logical support and the number of recovery
chains attached to the reference boundary (left for X chains, top for Z).
"""

from __future__ import annotations

import numpy as np

from ..pauli import PauliString
from .layout import SurfaceCodeLayout
from .matching import max_weight_matching_arrays
from .sampling import ShotBatch, SyndromeHistory


def _match_graph(coords_a, coords_b, rounds, bdry_near, bdry_side0):
    """Match one graph's defects; returns (mate, attach_side0_parity).

    ``bdry_near[i]`` is defect i's distance to its nearest boundary and
    ``bdry_side0[i]`` says whether that boundary is the reference side.
    """
    k = coords_a.shape[0]
    if k == 0:
        return [], 0
    if k == 1:
        return [-1], int(bdry_side0[0])
    wb = bdry_near
    da = np.abs(coords_a[:, None] - coords_a[None, :])
    db = np.abs(coords_b[:, None] - coords_b[None, :])
    dr = np.abs(rounds[:, None] - rounds[None, :])
    w = da + db + dr
    gain = wb[:, None] + wb[None, :] - w
    iu, iv = np.nonzero(np.triu(gain, 1) > 0)
    if k == 2:
        if iu.size:
            return [1, 0], 0
        return [-1, -1], int(bdry_side0[0]) ^ int(bdry_side0[1])
    mate = max_weight_matching_arrays(
        k, iu.astype(np.int64), iv.astype(np.int64), gain[iu, iv].astype(np.int64)
    )
    parity = 0
    for u in range(k):
        if mate[u] == -1 and bdry_side0[u]:
            parity ^= 1
    return mate, parity


def _graph_defects(layout, det, kind):
    rounds, stabs = np.nonzero(det)
    if kind == "z":
        coords = layout.z_coords
        bdry = layout.z_bdry
    else:
        coords = layout.x_coords
        bdry = layout.x_bdry
    a = coords[stabs, 0]
    b = coords[stabs, 1]
    near = bdry[stabs].min(axis=1)
    side0 = bdry[stabs, 0] < bdry[stabs, 1]
    return stabs, a, b, rounds, near, side0


def decode_flags(layout: SurfaceCodeLayout, det_z: np.ndarray, det_x: np.ndarray) -> tuple[int, int]:
    """Boundary-attachment parities of the two matchings for one shot."""
    _, za, zb, zr, znear, zside = _graph_defects(layout, det_z, "z")
    _, par_x = _match_graph(za, zb, zr, znear, zside)
    _, xa, xb, xr, xnear, xside = _graph_defects(layout, det_x, "x")
    _, par_z = _match_graph(xa, xb, xr, xnear, xside)
    return par_x, par_z


def decode_batch(layout: SurfaceCodeLayout, batch: ShotBatch) -> tuple[np.ndarray, np.ndarray]:
    """Logical flip flags (fx, fz) for every shot in a batch."""
    shots = batch.detectors_z.shape[0]
    fx = np.empty(shots, dtype=np.uint8)
    fz = np.empty(shots, dtype=np.uint8)
    for s in range(shots):
        par_x, par_z = decode_flags(layout, batch.detectors_z[s], batch.detectors_x[s])
        fx[s] = batch.x_cross[s] ^ par_x
        fz[s] = batch.z_cross[s] ^ par_z
    return fx, fz


# ---------------------------------------------------------------------------
# explicit recovery construction (contract path; used by tests and small runs)
# ---------------------------------------------------------------------------


def _chain_qubits_z(layout, a1, b1, a2, b2):
    """Data qubits of the canonical X-recovery path between two Z-stabilizers."""
    out = []
    step = 1 if a2 > a1 else -1
    for a in range(a1, a2, step):
        out.append(layout.data_index[(2 * min(a, a + step) + 1, 2 * b1 + 1)])
    step = 1 if b2 > b1 else -1
    for b in range(b1, b2, step):
        out.append(layout.data_index[(2 * a2, 2 * min(b, b + step) + 2)])
    return out


def _boundary_chain_z(layout, a, b, side0):
    if side0:
        return [layout.data_index[(2 * a, 2 * bb)] for bb in range(0, b + 1)]
    return [layout.data_index[(2 * a, 2 * bb)] for bb in range(b + 1, layout.d)]


def _chain_qubits_x(layout, a1, b1, a2, b2):
    out = []
    step = 1 if a2 > a1 else -1
    for a in range(a1, a2, step):
        out.append(layout.data_index[(2 * min(a, a + step) + 2, 2 * b1)])
    step = 1 if b2 > b1 else -1
    for b in range(b1, b2, step):
        out.append(layout.data_index[(2 * a2 + 1, 2 * min(b, b + step) + 1)])
    return out


def _boundary_chain_x(layout, a, b, side0):
    if side0:
        return [layout.data_index[(2 * aa, 2 * b)] for aa in range(0, a + 1)]
    return [layout.data_index[(2 * aa, 2 * b)] for aa in range(a + 1, layout.d)]


def decode_mwpm(layout: SurfaceCodeLayout, history: SyndromeHistory) -> PauliString:
    """Explicit recovery operator for one shot (X part from the Z graph, Z from X)."""
    det_z, det_x = history.detectors()
    xmask = 0
    zmask = 0
    for kind, det in (("z", det_z), ("x", det_x)):
        stabs, a, b, rounds, near, side0 = _graph_defects(layout, det, kind)
        mate, _ = _match_graph(a, b, rounds, near, side0)
        for u in range(len(mate)):
            v = mate[u]
            if v == -1:
                if kind == "z":
                    qs = _boundary_chain_z(layout, int(a[u]), int(b[u]), bool(side0[u]))
                else:
                    qs = _boundary_chain_x(layout, int(a[u]), int(b[u]), bool(side0[u]))
            elif v > u:
                if kind == "z":
                    qs = _chain_qubits_z(layout, int(a[u]), int(b[u]), int(a[v]), int(b[v]))
                else:
                    qs = _chain_qubits_x(layout, int(a[u]), int(b[u]), int(a[v]), int(b[v]))
            else:
                continue
            for q in qs:
                if kind == "z":
                    xmask ^= 1 << q
                else:
                    zmask ^= 1 << q
    return PauliString(layout.n_data, xmask, zmask, bin(xmask & zmask).count("1"))


def classify_residual(layout: SurfaceCodeLayout, residual: PauliString) -> tuple[int, int]:
    """(fx, fz): does the residual act as logical X / logical Z?"""
    from ..pauli import commutes

    fx = 0 if commutes(residual, layout.logical_z()) else 1
    fz = 0 if commutes(residual, layout.logical_x()) else 1
    return fx, fz
