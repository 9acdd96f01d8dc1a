"""Surface-code Monte Carlo with probabilistic error cancellation in the logical space."""

__version__ = "0.1.0"

from .pauli import PauliString, commutes, pauli_mul
from .ptm import TransferMatrix, ptm_apply, ptm_compose, ptm_of_channel
from .quasiprob import (
    PauliChannel,
    QuasiDecomposition,
    decompose_inverse_1q,
    first_order_cost,
    invert_pauli_channel,
    qem_cost,
    sampling_overhead,
)

__all__ = [
    "PauliString",
    "pauli_mul",
    "commutes",
    "TransferMatrix",
    "ptm_of_channel",
    "ptm_compose",
    "ptm_apply",
    "PauliChannel",
    "QuasiDecomposition",
    "invert_pauli_channel",
    "decompose_inverse_1q",
    "first_order_cost",
    "qem_cost",
    "sampling_overhead",
]
