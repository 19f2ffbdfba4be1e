"""Nonbinary min-sum decoder with trellis check-node processing.

Messages are cost vectors relative to symbol zero: component a holds
cost(a) - cost(0), so the implicit zero component is always 0. The check
node computation runs on the same single-parity-check trellis as the dual
decoder, in the (min, +) semiring: the outgoing cost of symbol a toward a
position is the cheapest completion of the row with that symbol there,
summing the incoming costs of the other positions. The schedule is flooding
(all check updates, then all variable updates), with no damping or offset.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .base import DecodeResult
from .code import TannerGraph, local_spc, syndrome
from .trellis import min_cost_marginals

__all__ = [
    "MessageState",
    "init_messages",
    "ms_vn_update",
    "ms_cn_update",
    "hard_decision",
    "decode",
]


@dataclass
class MessageState:
    """Per-directed-edge message vectors, both shaped (num_edges, q-1)."""

    graph: TannerGraph
    vn_to_cn: np.ndarray
    cn_to_vn: np.ndarray
    iterations: int = 0
    _spc_cache: dict = field(default_factory=dict, repr=False)

    def row_code(self, j: int):
        code = self._spc_cache.get(j)
        if code is None:
            code = local_spc(self.graph, j)
            self._spc_cache[j] = code
        return code


def _check_llr(graph: TannerGraph, llr) -> np.ndarray:
    costs = np.asarray(llr, dtype=float)
    if costs.shape != (graph.n, graph.q - 1):
        raise ValueError(
            f"expected llr of shape {(graph.n, graph.q - 1)}, got {costs.shape}"
        )
    if not np.isfinite(costs).all():
        raise ValueError("llr entries must be finite")
    return costs


def init_messages(graph: TannerGraph, llr) -> MessageState:
    """Variable messages start as the channel costs, check messages as zero."""
    costs = _check_llr(graph, llr)
    return MessageState(
        graph=graph,
        vn_to_cn=costs[graph.edge_var].copy(),
        cn_to_vn=np.zeros((graph.num_edges, graph.q - 1)),
    )


def ms_cn_update(state: MessageState, graph: TannerGraph | None = None,
                 j: int | None = None) -> np.ndarray:
    """Recompute the outgoing messages of check j from the row trellis.

    Entry a of the message toward a position is the minimum cost, over row
    codewords with symbol a there, of the other positions' incoming costs,
    re-expressed relative to the symbol-zero completion.
    """
    g = state.graph if graph is None else graph
    ids = g.row_edge_ids[j]
    marg = min_cost_marginals(state.row_code(j), state.vn_to_cn[ids])
    out = marg[:, 1:] - marg[:, :1]
    state.cn_to_vn[ids] = out
    return out


def ms_vn_update(state: MessageState, llr, i: int) -> np.ndarray:
    """Recompute the outgoing messages of variable i: channel costs plus the
    incoming check messages, excluding the destination edge."""
    g = state.graph
    costs = np.asarray(llr, dtype=float)
    ids = g.col_edge_ids[i]
    out = np.empty((len(ids), g.q - 1))
    for k, e in enumerate(ids):
        others = np.delete(ids, k)
        out[k] = costs[i] + state.cn_to_vn[others].sum(axis=0)
    state.vn_to_cn[ids] = out
    return out


def hard_decision(state: MessageState, llr) -> np.ndarray:
    """Per-symbol argmin of channel costs plus all incoming check messages;
    ties break toward the smallest residue."""
    g = state.graph
    costs = np.asarray(llr, dtype=float)
    totals = costs.copy()
    np.add.at(totals, g.edge_var, state.cn_to_vn)
    scores = np.concatenate([np.zeros((g.n, 1)), totals], axis=1)
    return scores.argmin(axis=1).astype(np.int64)


def decode(graph: TannerGraph, llr, max_iterations: int = 64) -> DecodeResult:
    """Flooding min-sum with early stop on a zero syndrome; the decision is
    also checked before the first iteration."""
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    costs = _check_llr(graph, llr)
    state = init_messages(graph, costs)
    converged = False
    word = hard_decision(state, costs)
    while True:
        if not syndrome(word, graph).any():
            converged = True
            break
        if state.iterations >= max_iterations:
            break
        for j in range(graph.m):
            ms_cn_update(state, j=j)
        for i in range(graph.n):
            ms_vn_update(state, costs, i)
        state.iterations += 1
        word = hard_decision(state, costs)
    return DecodeResult(word=word, converged=converged, iterations_used=state.iterations)
