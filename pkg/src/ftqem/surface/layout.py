"""Unrotated planar surface-code geometry.

The distance-d patch lives on a (2d-1) x (2d-1) grid.  Data qubits sit on
sites with even coordinate sum: d*d of them on (even, even) sites and
(d-1)*(d-1) on (odd, odd) sites.  Z-stabilizers occupy (even, odd) sites and
X-stabilizers (odd, even) sites; each acts on its (up to four) grid
neighbors.

Error chains of X type terminate on the left/right grid edges (j = 0 and
j = 2d-2) and are detected by Z-stabilizers; Z-type chains terminate on the
top/bottom edges and are detected by X-stabilizers.  The logical Z operator
is the left column of data qubits, the logical X the top row; both have
weight d.

For matching, a stabilizer of either type carries reduced coordinates
(a, b): Z-stabilizer (2a, 2b+1) and X-stabilizer (2a+1, 2b).  Two same-type
stabilizers share a data qubit exactly when |da| + |db| = 1, so the
space-time Manhattan distance |da| + |db| + |dr| is the decoding metric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..pauli import PauliString


@dataclass
class SurfaceCodeLayout:
    d: int
    data_coords: list = field(init=False)
    data_index: dict = field(init=False)
    z_stabs: list = field(init=False)  # support (data indices) per Z-stabilizer
    x_stabs: list = field(init=False)
    adj_z: np.ndarray = field(init=False)  # (n_data, n_z) incidence, int8
    adj_x: np.ndarray = field(init=False)
    # reduced (a, b) coordinates per stabilizer, plus boundary distances
    z_coords: np.ndarray = field(init=False)
    x_coords: np.ndarray = field(init=False)
    z_bdry: np.ndarray = field(init=False)  # (n_z, 2): distance to (left, right)
    x_bdry: np.ndarray = field(init=False)  # (n_x, 2): distance to (top, bottom)
    logical_z_support: np.ndarray = field(init=False)  # data indices, column j=0
    logical_x_support: np.ndarray = field(init=False)  # data indices, row i=0

    def __post_init__(self):
        d = self.d
        if d < 3 or d % 2 == 0:
            raise ValueError("distance must be an odd integer >= 3")
        size = 2 * d - 1
        self.data_coords = [
            (i, j) for i in range(size) for j in range(size) if (i + j) % 2 == 0
        ]
        self.data_index = {c: q for q, c in enumerate(self.data_coords)}

        def neighbors(i, j):
            out = []
            for ii, jj in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
                if 0 <= ii < size and 0 <= jj < size:
                    out.append(self.data_index[(ii, jj)])
            return out

        self.z_stabs, z_coords = [], []
        for a in range(d):
            for b in range(d - 1):
                self.z_stabs.append(neighbors(2 * a, 2 * b + 1))
                z_coords.append((a, b))
        self.x_stabs, x_coords = [], []
        for a in range(d - 1):
            for b in range(d):
                self.x_stabs.append(neighbors(2 * a + 1, 2 * b))
                x_coords.append((a, b))
        self.z_coords = np.array(z_coords, dtype=np.int64)
        self.x_coords = np.array(x_coords, dtype=np.int64)

        nd = len(self.data_coords)
        self.adj_z = np.zeros((nd, len(self.z_stabs)), dtype=np.int8)
        for s, sup in enumerate(self.z_stabs):
            self.adj_z[sup, s] = 1
        self.adj_x = np.zeros((nd, len(self.x_stabs)), dtype=np.int8)
        for s, sup in enumerate(self.x_stabs):
            self.adj_x[sup, s] = 1

        zb = self.z_coords[:, 1]
        self.z_bdry = np.stack([zb + 1, (d - 1) - zb], axis=1).astype(np.int64)
        xa = self.x_coords[:, 0]
        self.x_bdry = np.stack([xa + 1, (d - 1) - xa], axis=1).astype(np.int64)

        self.logical_z_support = np.array(
            [self.data_index[(2 * r, 0)] for r in range(d)], dtype=np.int64
        )
        self.logical_x_support = np.array(
            [self.data_index[(0, 2 * c)] for c in range(d)], dtype=np.int64
        )

    @property
    def n_data(self) -> int:
        return len(self.data_coords)

    @property
    def n_z(self) -> int:
        return len(self.z_stabs)

    @property
    def n_x(self) -> int:
        return len(self.x_stabs)

    # -- Pauli views (tests and oracles) ----------------------------------
    def z_stabilizer_pauli(self, s: int) -> PauliString:
        z = 0
        for q in self.z_stabs[s]:
            z |= 1 << q
        return PauliString(self.n_data, 0, z)

    def x_stabilizer_pauli(self, s: int) -> PauliString:
        x = 0
        for q in self.x_stabs[s]:
            x |= 1 << q
        return PauliString(self.n_data, x, 0)

    def logical_z(self) -> PauliString:
        z = 0
        for q in self.logical_z_support:
            z |= 1 << int(q)
        return PauliString(self.n_data, 0, z)

    def logical_x(self) -> PauliString:
        x = 0
        for q in self.logical_x_support:
            x |= 1 << int(q)
        return PauliString(self.n_data, x, 0)

    def syndrome_of(self, err: PauliString) -> tuple[np.ndarray, np.ndarray]:
        """(Z-stabilizer, X-stabilizer) syndromes of a static data error."""
        xm = np.array([(err.x >> q) & 1 for q in range(self.n_data)], dtype=np.int8)
        zm = np.array([(err.z >> q) & 1 for q in range(self.n_data)], dtype=np.int8)
        return (xm @ self.adj_z) % 2, (zm @ self.adj_x) % 2
