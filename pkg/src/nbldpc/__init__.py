"""Nonbinary LDPC decoding over Z_q.

A dual coordinate-ascent LP decoder and a min-sum baseline, both using the
same q-state trellis for check-node processing, plus alist I/O, a QPSK/AWGN
channel model, brute-force oracles, and a Monte-Carlo simulation CLI.
"""

from .base import DecodeResult
from .channel import ChannelConfig, add_noise, ebn0_to_sigma, llr, modulate, qpsk_constellation
from .code import (
    AlistError,
    SpcCode,
    TannerGraph,
    emit_alist,
    enumerate_spc_codewords,
    lift_binary_graph,
    load_graph,
    local_spc,
    parse_alist,
    syndrome,
)
from .estimators import LclpDecoder, MinSumDecoder
from .lclp import decode as lclp_decode
from .lclp import dual_objective, init_dual_state
from .minsum import decode as ms_decode
from .ring import (
    MIN_SUM,
    SUM_PRODUCT,
    RingElement,
    Semiring,
    big_xi,
    ring_add,
    ring_mul,
    soft_min,
    xi,
)
from .sim import SimConfig, SimRecord, run_point, run_sweep
from .trellis import CheckMarginals, all_marginals, min_cost_marginals, total_mass

__version__ = "0.1.0"

__all__ = [
    "DecodeResult",
    "ChannelConfig",
    "add_noise",
    "ebn0_to_sigma",
    "llr",
    "modulate",
    "qpsk_constellation",
    "AlistError",
    "SpcCode",
    "TannerGraph",
    "emit_alist",
    "enumerate_spc_codewords",
    "lift_binary_graph",
    "load_graph",
    "local_spc",
    "parse_alist",
    "syndrome",
    "LclpDecoder",
    "MinSumDecoder",
    "lclp_decode",
    "dual_objective",
    "init_dual_state",
    "ms_decode",
    "MIN_SUM",
    "SUM_PRODUCT",
    "RingElement",
    "Semiring",
    "big_xi",
    "ring_add",
    "ring_mul",
    "soft_min",
    "xi",
    "SimConfig",
    "SimRecord",
    "run_point",
    "run_sweep",
    "CheckMarginals",
    "all_marginals",
    "min_cost_marginals",
    "total_mass",
]
