"""Matching kernel dispatch: compiled extension if available, else pure Python.

Set ``FTQEM_PURE_PY=1`` to force the pure-Python lane (used by the benchmark
and the differential tests).  Both lanes implement the same algorithm with
the same tie-breaking, so they return identical matchings.

The decoder-facing entry point is :func:`decode_pairing`, which solves
minimum-weight perfect matching *with a boundary*: every defect either pairs
with another defect at cost ``w(u, v)`` or terminates at the boundary at cost
``boundary_weight[u]``.  This is reduced to maximum-weight matching on the
defect graph with transformed weights ``wb(u) + wb(v) - w(u, v)`` (edges for
which this is not positive can never improve on two boundary attachments and
are pruned by the caller).
"""

from __future__ import annotations

import os

from .blossom_py import max_weight_matching as _mwm_python
from .blossom_py import max_weight_matching_arrays as _mwma_python

try:
    from ._blossom import max_weight_matching as _mwm_compiled
    from ._blossom import max_weight_matching_arrays as _mwma_compiled
except ImportError:  # pragma: no cover - build-environment dependent
    _mwm_compiled = None
    _mwma_compiled = None

if os.environ.get("FTQEM_PURE_PY") == "1" or _mwm_compiled is None:
    BACKEND = "python"
    max_weight_matching = _mwm_python
    max_weight_matching_arrays = _mwma_python
else:
    BACKEND = "compiled"
    max_weight_matching = _mwm_compiled
    max_weight_matching_arrays = _mwma_compiled


def decode_pairing(boundary_weights, edges) -> list[int]:
    """Pair defects against each other or the boundary at minimum total weight.

    Parameters
    ----------
    boundary_weights:
        Integer cost of sending each defect to its nearest boundary.
    edges:
        ``(u, v, w)`` candidate pairs with ``w < wb[u] + wb[v]``.

    Returns
    -------
    mate list: ``mate[u]`` is the partner defect or -1 for a boundary match.
    """
    k = len(boundary_weights)
    if k == 0:
        return []
    if k == 1:
        return [-1]
    if k == 2:
        if edges:
            u, v, w = edges[0]
            if w < boundary_weights[u] + boundary_weights[v]:
                return [v if i == u else u for i in range(2)]
        return [-1, -1]
    transformed = [
        (u, v, boundary_weights[u] + boundary_weights[v] - w) for (u, v, w) in edges
    ]
    transformed = [(u, v, w) for (u, v, w) in transformed if w > 0]
    return max_weight_matching(k, transformed)


def pairing_total_weight(mate, boundary_weights, weight_fn) -> int:
    """Total decode weight of a pairing (for tests and the benchmark)."""
    total = 0
    for u, m in enumerate(mate):
        if m == -1:
            total += boundary_weights[u]
        elif m > u:
            total += weight_fn(u, m)
    return total
