"""Iterative dual coordinate-ascent LP decoder for nonbinary LDPC codes.

The decoder maximizes a soft-min-smoothed dual of the decoding LP by
cyclically updating one edge of the Tanner graph at a time. Each edge (i, j)
carries a (q-1)-vector of dual costs; the variable side additionally carries
a fixed half-edge pinned to the negated channel log-likelihood ratios. The
check-side view of an edge is the negation of the variable-side vector and
is derived on read, never stored.

One edge update compares two soft aggregates per nonzero symbol a:

* on the variable side, over the repetition code of the variable (whose
  codewords are the constant words), split into the single word equal to a
  (this edge excluded) versus all words different from a;
* on the check side, over the local single-parity-check code, split into
  codewords with symbol a at this edge's position (position excluded) versus
  all others, both computed on the row trellis.

The new edge vector is half the difference of those two splits, all symbol
components written simultaneously from the pre-update state. Smoothing is
controlled by kappa; kappa = inf switches every aggregate to a plain
minimum/maximum (min-sum semiring on the trellis side).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .base import DecodeResult
from .code import TannerGraph, local_spc, syndrome
from .trellis import position_marginals, total_mass

__all__ = [
    "DualState",
    "init_dual_state",
    "vn_marginals",
    "cn_marginals",
    "edge_update",
    "iterate",
    "dual_objective",
    "hard_decision",
    "decode",
]


@dataclass
class DualState:
    """Dual variables of one decoding session.

    ``channel_duals[i]`` is the fixed half-edge (the negated channel costs);
    ``edge_duals[e]`` is the variable-side vector of graph edge e;
    ``totals[i]`` caches channel_duals[i] plus the sum of the edge vectors
    incident to variable i.
    """

    graph: TannerGraph
    kappa: float
    channel_duals: np.ndarray
    edge_duals: np.ndarray
    totals: np.ndarray
    iterations: int = 0
    edge_updates: int = 0
    _spc_cache: dict = field(default_factory=dict, repr=False)

    def row_code(self, j: int):
        code = self._spc_cache.get(j)
        if code is None:
            code = local_spc(self.graph, j)
            self._spc_cache[j] = code
        return code

    def row_costs(self, j: int) -> np.ndarray:
        """Check-side cost vectors of row j (negated edge duals), (d, q-1)."""
        return -self.edge_duals[self.graph.row_edge_ids[j]]

    def refresh_totals(self) -> None:
        """Recompute the per-variable cache from scratch (kills float drift)."""
        totals = self.channel_duals.copy()
        np.add.at(totals, self.graph.edge_var, self.edge_duals)
        self.totals = totals


def init_dual_state(graph: TannerGraph, llr, kappa: float) -> DualState:
    """Fresh state: half-edges pinned to the negated channel costs, every
    true edge vector zero."""
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    costs = np.asarray(llr, dtype=float)
    if costs.shape != (graph.n, graph.q - 1):
        raise ValueError(
            f"expected llr of shape {(graph.n, graph.q - 1)}, got {costs.shape}"
        )
    if not np.isfinite(costs).all():
        raise ValueError("llr entries must be finite")
    channel = -costs
    return DualState(
        graph=graph,
        kappa=kappa,
        channel_duals=channel,
        edge_duals=np.zeros((graph.num_edges, graph.q - 1)),
        totals=channel.copy(),
    )


def _vn_marginal_arrays(state: DualState, i: int, e: int) -> tuple[np.ndarray, np.ndarray]:
    """(symbol, complement) variable-side aggregates for all a != 0.

    With S_b the summed dual costs of symbol b over the half-edge and all
    incident edges (S_0 = 0): the symbol aggregate at a is S_a minus this
    edge's contribution; the complement aggregate is the soft maximum of S_b
    over b != a (plain maximum for kappa = inf).
    """
    q = state.graph.q
    kappa = state.kappa
    sums = np.concatenate(([0.0], state.totals[i]))
    v_sym = state.totals[i] - state.edge_duals[e]

    keep = np.ones((q - 1, q), dtype=bool)
    keep[np.arange(q - 1), np.arange(1, q)] = False
    rows = np.where(keep, sums[None, :], -np.inf)
    if math.isinf(kappa):
        v_comp = rows.max(axis=1)
    else:
        m = rows.max(axis=1)
        v_comp = m + np.log(np.exp(kappa * (rows - m[:, None])).sum(axis=1)) / kappa
    return v_sym, v_comp


def _edge_id(graph: TannerGraph, i: int, j: int) -> int:
    try:
        return graph.edge_index[(j, i)]
    except KeyError:
        raise ValueError(f"({i}, {j}) is not an edge of the graph") from None


def vn_marginals(state: DualState, i: int, j: int, alpha: int) -> tuple[float, float]:
    """(complement, symbol) variable-side aggregates for one symbol."""
    e = _edge_id(state.graph, i, j)
    if not 1 <= alpha < state.graph.q:
        raise ValueError(f"alpha must lie in 1..{state.graph.q - 1}, got {alpha}")
    v_sym, v_comp = _vn_marginal_arrays(state, i, e)
    return float(v_comp[alpha - 1]), float(v_sym[alpha - 1])


def _cn_marginal_arrays(state: DualState, j: int, i: int) -> tuple[np.ndarray, np.ndarray]:
    e = _edge_id(state.graph, i, j)
    t = int(state.graph.edge_local_pos[e])
    sym, comp = position_marginals(state.row_code(j), state.row_costs(j), state.kappa, t)
    return sym, comp


def cn_marginals(state: DualState, j: int, i: int, alpha: int) -> tuple[float, float]:
    """(complement, symbol) check-side aggregates for one symbol, computed on
    the row trellis in the semiring selected by kappa."""
    if not 1 <= alpha < state.graph.q:
        raise ValueError(f"alpha must lie in 1..{state.graph.q - 1}, got {alpha}")
    sym, comp = _cn_marginal_arrays(state, j, i)
    return float(comp[alpha - 1]), float(sym[alpha - 1])


def edge_update(state: DualState, i: int, j: int) -> DualState:
    """Overwrite the edge vector of (i, j), every symbol component computed
    from the same pre-update snapshot."""
    e = _edge_id(state.graph, i, j)
    v_sym, v_comp = _vn_marginal_arrays(state, i, e)
    c_sym, c_comp = _cn_marginal_arrays(state, j, i)
    new = 0.5 * ((v_comp - v_sym) - (c_comp - c_sym))
    state.totals[i] += new - state.edge_duals[e]
    state.edge_duals[e] = new
    state.edge_updates += 1
    return state


def iterate(state: DualState, graph: TannerGraph | None = None) -> DualState:
    """One full pass over the edges in circular order: ascending row, then
    ascending column within each row."""
    g = state.graph if graph is None else graph
    for e in range(g.num_edges):
        edge_update(state, int(g.edge_var[e]), int(g.edge_check[e]))
    state.iterations += 1
    state.refresh_totals()
    return state


def dual_objective(state: DualState, graph: TannerGraph | None = None) -> float:
    """Value of the smoothed dual at the current state, with the per-node
    bound variables taken tight.

    Variable terms are soft minima of the negated summed dual costs over the
    q constant words; check terms are the negated trellis total masses of the
    rows. For kappa = inf both reduce to plain minima.
    """
    g = state.graph if graph is None else graph
    kappa = state.kappa
    sums = np.concatenate([np.zeros((g.n, 1)), state.totals], axis=1)
    z = -sums
    m = z.min(axis=1)
    if math.isinf(kappa):
        phi = m
    else:
        phi = m - np.log(np.exp(-kappa * (z - m[:, None])).sum(axis=1)) / kappa
    theta = -np.array([
        total_mass(state.row_code(j), state.row_costs(j), kappa) for j in range(g.m)
    ])
    return float(phi.sum() + theta.sum())


def hard_decision(state: DualState, graph: TannerGraph | None = None) -> np.ndarray:
    """Per-symbol argmin of the negated summed dual costs; ties break toward
    the smallest residue."""
    g = state.graph if graph is None else graph
    scores = np.concatenate([np.zeros((g.n, 1)), -state.totals], axis=1)
    return scores.argmin(axis=1).astype(np.int64)


def decode(graph: TannerGraph, llr, kappa: float = math.inf,
           max_iterations: int = 64) -> DecodeResult:
    """Run the decoder until the hard decision satisfies every check or the
    pass cap is reached. The hard decision is evaluated before the first pass
    as well, so a channel-dominated frame can finish with zero passes."""
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    state = init_dual_state(graph, llr, kappa)
    converged = False
    word = hard_decision(state)
    while True:
        if not syndrome(word, graph).any():
            converged = True
            break
        if state.iterations >= max_iterations:
            break
        iterate(state)
        word = hard_decision(state)
    objective = None if math.isinf(kappa) else dual_objective(state)
    return DecodeResult(
        word=word,
        converged=converged,
        iterations_used=state.iterations,
        final_objective=objective,
    )
