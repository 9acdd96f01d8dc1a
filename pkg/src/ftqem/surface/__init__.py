"""Surface-code Monte Carlo: layout, phenomenological sampling, MWPM decoding."""

from .decoder import decode_batch, decode_mwpm
from .estimate import (
    LogicalChannelEstimate,
    MarkovianityResult,
    estimate_logical_channel,
    fit_suppression,
    locate_crossings,
    markovianity_fit,
    scan_to_csv,
    threshold_scan,
)
from .layout import SurfaceCodeLayout
from .sampling import SyndromeHistory, sample_batch, sample_run

__all__ = [
    "SurfaceCodeLayout",
    "SyndromeHistory",
    "sample_run",
    "sample_batch",
    "decode_mwpm",
    "decode_batch",
    "LogicalChannelEstimate",
    "estimate_logical_channel",
    "threshold_scan",
    "scan_to_csv",
    "locate_crossings",
    "fit_suppression",
    "markovianity_fit",
    "MarkovianityResult",
]
