"""Trellis marginalization for single-parity-check codes over Z_q.

The trellis of a parity-check row has q states per step: the running
coefficient-weighted partial sum of the symbols placed so far. A branch at
step t for symbol b goes from state s to state s + b*h_t (mod q), so the
construction stays correct, with the same q-state complexity, when a
coefficient is a zero divisor.

Conventions, used consistently by every function here:

* A cost table assigns score(b) = table[t, b] to symbol b at position t,
  with table[t, 0] = 0 always (symbol zero carries no cost).
* In sum-product mode the branch metric is exp(kappa * score); forward and
  backward sweeps then aggregate sums of products of branch metrics. Each
  position's metrics are stored shifted by their maximum (a per-position log
  offset) and each sweep renormalizes a step whenever its values leave a safe
  range, so no intermediate quantity overflows for any practical kappa.
* In min-sum mode the branch metric is the raw score and the recursions run
  in the (min, +) semiring.
* ``all_marginals`` and ``position_marginals`` return results in cost units.
  For finite kappa that is (1/kappa) log of the aggregated mass; for
  kappa = inf they return the limit of that quantity, i.e. max-score
  marginals, obtained by running the (min, +) recursion on negated scores
  and negating the result.

For each position i and symbol a != 0 the two marginals are: the aggregate
over codewords with b_i = a of the score excluding position i, and the
aggregate over codewords with b_i != a of the full score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .code import SpcCode
from .ring import MIN_SUM, SUM_PRODUCT, Semiring, semiring_for_kappa

__all__ = [
    "BranchMetricTable",
    "TrellisMetrics",
    "build_branch_metrics",
    "forward_metrics",
    "backward_metrics",
    "excluded_forward_metrics",
    "compute_metrics",
    "symbol_marginal",
    "complement_marginal_branches",
    "complement_marginal_states",
    "CheckMarginals",
    "position_marginals",
    "all_marginals",
    "total_mass",
    "min_cost_marginals",
]

# Rescale a sweep step when its largest metric leaves this range.
_RESCALE_HI = 1e100
_RESCALE_LO = 1e-100


@dataclass(frozen=True)
class _Kernel:
    """Precomputed index tensors for one (q, coefficients) trellis."""

    pred: np.ndarray  # (d, q, q): pred[t, b, s'] = (s' - b*h_t) % q
    succ: np.ndarray  # (d, q, q): succ[t, b, s] = (s + b*h_t) % q
    mask: np.ndarray  # (q-1, q): mask[a-1, b] = (b != a)


@lru_cache(maxsize=4096)
def _kernel(q: int, coeffs: tuple[int, ...]) -> _Kernel:
    h = np.asarray(coeffs, dtype=np.int64)
    s = np.arange(q, dtype=np.int64)
    b = np.arange(q, dtype=np.int64)
    shift = b[None, :, None] * h[:, None, None]
    pred = (s[None, None, :] - shift) % q
    succ = (s[None, None, :] + shift) % q
    mask = np.ones((q - 1, q), dtype=bool)
    mask[np.arange(q - 1), np.arange(1, q)] = False
    return _Kernel(pred=pred, succ=succ, mask=mask)


@dataclass(frozen=True)
class BranchMetricTable:
    """Per-position, per-symbol branch metrics for one parity-check row.

    ``values[t, b]`` holds the (possibly shifted) metric of symbol b at
    position t; the true sum-product metric is values * exp(log_offsets[t]).
    In min-sum mode the values are raw scores and the offsets are zero.
    """

    semiring: Semiring
    q: int
    coefficients: tuple[int, ...]
    values: np.ndarray
    log_offsets: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    def true_values(self, t: int) -> np.ndarray:
        """Unshifted metrics at position t (sum-product convenience)."""
        return self.values[t] * math.exp(self.log_offsets[t])


def _full_cost_table(code: SpcCode, edge_costs) -> np.ndarray:
    costs = np.asarray(edge_costs, dtype=float)
    if costs.shape != (len(code), code.q - 1):
        raise ValueError(
            f"expected costs of shape {(len(code), code.q - 1)}, got {costs.shape}"
        )
    if not np.isfinite(costs).all():
        raise ValueError("cost inputs must be finite")
    full = np.zeros((len(code), code.q), dtype=float)
    full[:, 1:] = costs
    return full


def build_branch_metrics(code: SpcCode, edge_costs, semiring: Semiring,
                         kappa: float | None = None) -> BranchMetricTable:
    """Branch metrics from per-position cost vectors (q-1 entries each).

    Sum-product: metric(b) = exp(kappa * score(b)), stored max-shifted per
    position with the shift recorded in log_offsets. Min-sum: metric(b) is
    the raw score.
    """
    full = _full_cost_table(code, edge_costs)
    d = len(code)
    if semiring.name == "sum-product":
        if kappa is None or not (kappa > 0 and math.isfinite(kappa)):
            raise ValueError("sum-product branch metrics need a finite positive kappa")
        offsets = kappa * full.max(axis=1)
        values = np.exp(kappa * full - offsets[:, None])
    else:
        values = full
        offsets = np.zeros(d)
    return BranchMetricTable(
        semiring=semiring,
        q=code.q,
        coefficients=tuple(code.coefficients),
        values=values,
        log_offsets=offsets,
    )


@dataclass
class TrellisMetrics:
    """Forward/backward state metrics with their accumulated log scales.

    ``forward[t, s]`` aggregates prefixes (b_0..b_{t-1}) whose partial sum is
    s; ``backward[t, s]`` aggregates suffixes (b_t..b_{d-1}) whose sum is -s,
    so that pairing forward and backward at the same step covers exactly the
    codewords. ``forward_excl[t, s, a-1]``, when computed, aggregates the
    same prefixes as forward[t, s] but restricted to a last symbol != a.
    True values are stored * exp(forward_log[t]) (respectively backward_log).
    """

    semiring: Semiring
    q: int
    coefficients: tuple[int, ...]
    forward: np.ndarray
    forward_log: np.ndarray
    backward: np.ndarray
    backward_log: np.ndarray
    forward_excl: np.ndarray | None = None


def _boundary_row(sr: Semiring, q: int) -> np.ndarray:
    row = np.full(q, sr.combine_identity, dtype=float)
    row[0] = sr.extend_identity
    return row


def _step_scale(sr: Semiring, row: np.ndarray) -> float:
    """Renormalize a sum-product step that drifts out of range; returns the
    natural log of the applied scale."""
    if sr.name != "sum-product":
        return 0.0
    top = row.max()
    if top > 0.0 and not _RESCALE_LO < top < _RESCALE_HI:
        row /= top
        return math.log(top)
    return 0.0


def forward_metrics(table: BranchMetricTable) -> tuple[np.ndarray, np.ndarray]:
    """Forward sweep; returns the (d+1, q) metric table and its log scales."""
    sr = table.semiring
    d, q = table.degree, table.q
    ker = _kernel(q, table.coefficients)
    fwd = np.empty((d + 1, q))
    logs = np.zeros(d + 1)
    fwd[0] = _boundary_row(sr, q)
    for t in range(d):
        contrib = sr.ext(fwd[t][ker.pred[t]], table.values[t][:, None])
        nxt = sr.red(contrib, axis=0)
        z = _step_scale(sr, nxt)
        fwd[t + 1] = nxt
        logs[t + 1] = logs[t] + table.log_offsets[t] + z
    return fwd, logs


def backward_metrics(table: BranchMetricTable) -> tuple[np.ndarray, np.ndarray]:
    """Backward sweep; mirror of the forward sweep over suffixes."""
    sr = table.semiring
    d, q = table.degree, table.q
    ker = _kernel(q, table.coefficients)
    bwd = np.empty((d + 1, q))
    logs = np.zeros(d + 1)
    bwd[d] = _boundary_row(sr, q)
    for t in range(d - 1, -1, -1):
        contrib = sr.ext(bwd[t + 1][ker.succ[t]], table.values[t][:, None])
        prv = sr.red(contrib, axis=0)
        z = _step_scale(sr, prv)
        bwd[t] = prv
        logs[t] = logs[t + 1] + table.log_offsets[t] + z
    return bwd, logs


def excluded_forward_metrics(table: BranchMetricTable, forward: np.ndarray,
                             forward_log: np.ndarray) -> np.ndarray:
    """Forward metrics restricted to prefixes whose most recent symbol avoids
    a given value.

    Returns a (d+1, q, q-1) table whose [t, s, a-1] entry aggregates the same
    prefixes as forward[t, s] except those ending in symbol a. The step-0
    boundary is the combine identity. Entries share the log scales of the
    plain forward table, so the two can be combined entry for entry; in
    particular, combining [t, s, a-1] with the step-t contribution of symbol
    a recovers forward[t, s].
    """
    sr = table.semiring
    d, q = table.degree, table.q
    ker = _kernel(q, table.coefficients)
    excl = np.full((d + 1, q, q - 1), sr.combine_identity)
    for t in range(d):
        contrib = sr.ext(forward[t][ker.pred[t]], table.values[t][:, None])  # (b, s')
        masked = np.where(ker.mask[:, :, None], contrib[None, :, :], sr.combine_identity)
        rows = sr.red(masked, axis=1)  # (q-1, s')
        # Align with the scale the plain forward sweep applied at this step.
        dz = forward_log[t + 1] - forward_log[t] - table.log_offsets[t]
        if dz != 0.0:
            rows = rows / math.exp(dz)
        excl[t + 1] = rows.T
    return excl


def compute_metrics(table: BranchMetricTable, with_excluded: bool = False) -> TrellisMetrics:
    fwd, flog = forward_metrics(table)
    bwd, blog = backward_metrics(table)
    fexcl = excluded_forward_metrics(table, fwd, flog) if with_excluded else None
    return TrellisMetrics(
        semiring=table.semiring,
        q=table.q,
        coefficients=table.coefficients,
        forward=fwd,
        forward_log=flog,
        backward=bwd,
        backward_log=blog,
        forward_excl=fexcl,
    )


def _check_position_symbol(metrics_q: int, degree: int, position: int, symbol: int) -> None:
    if not 0 <= position < degree:
        raise IndexError(f"position {position} out of range for degree {degree}")
    if not 1 <= symbol < metrics_q:
        raise ValueError(f"symbol must lie in 1..{metrics_q - 1}, got {symbol}")


def symbol_marginal(metrics: TrellisMetrics, table: BranchMetricTable,
                    position: int, symbol: int) -> float:
    """Aggregate over codewords with the given symbol at the given position,
    branch metric at that position excluded. Returned in the (scaled)
    semiring domain; cost-unit conversion is the caller's job: (1/kappa) log
    in sum-product, negation in min-sum.
    """
    d = table.degree
    _check_position_symbol(table.q, d, position, symbol)
    sr = table.semiring
    ker = _kernel(table.q, table.coefficients)
    gathered = metrics.backward[position + 1][ker.succ[position][symbol]]
    vals = sr.ext(metrics.forward[position], gathered)
    return float(sr.red(vals, axis=0))


def complement_marginal_branches(metrics: TrellisMetrics, table: BranchMetricTable,
                                 position: int, symbol: int) -> float:
    """Aggregate over codewords whose symbol at the position differs from the
    given one, full score included, evaluated branch by branch."""
    d = table.degree
    _check_position_symbol(table.q, d, position, symbol)
    sr = table.semiring
    ker = _kernel(table.q, table.coefficients)
    contrib = sr.ext(metrics.forward[position][ker.pred[position]],
                     table.values[position][:, None])  # (b, s')
    full = sr.ext(contrib, metrics.backward[position + 1][None, :])
    keep = np.where(ker.mask[symbol - 1][:, None], full, sr.combine_identity)
    return float(sr.red(keep.ravel(), axis=0))


def complement_marginal_states(metrics: TrellisMetrics, position: int, symbol: int) -> float:
    """Same aggregate as the branch form, read off per state from the
    excluded-forward table instead of per branch."""
    if metrics.forward_excl is None:
        raise ValueError("metrics were computed without the excluded-forward table")
    d = len(metrics.coefficients)
    _check_position_symbol(metrics.q, d, position, symbol)
    sr = metrics.semiring
    vals = sr.ext(metrics.forward_excl[position + 1][:, symbol - 1],
                  metrics.backward[position + 1])
    return float(sr.red(vals, axis=0))


# ---------------------------------------------------------------------------
# Cost-unit marginal bundles


@dataclass(frozen=True)
class CheckMarginals:
    """Cost-unit marginal pair for each (position, symbol).

    ``symbol[t, a-1]``: aggregate over codewords with symbol a at position t,
    position-t score excluded. ``complement[t, a-1]``: aggregate over
    codewords with symbol != a at position t, full score.
    """

    symbol: np.ndarray
    complement: np.ndarray


def _marginal_vectors(metrics: TrellisMetrics, table: BranchMetricTable, t: int,
                      method: str) -> tuple[np.ndarray, float, np.ndarray, float]:
    """Scaled-domain (symbol, complement) marginal vectors at position t,
    each with its accumulated log offset."""
    sr = table.semiring
    ker = _kernel(table.q, table.coefficients)
    pair_log = metrics.forward_log[t] + metrics.backward_log[t + 1]

    gathered = metrics.backward[t + 1][ker.succ[t][1:, :]]  # (q-1, q)
    sym = sr.red(sr.ext(metrics.forward[t][None, :], gathered), axis=1)

    if method == "states":
        comp = sr.red(sr.ext(metrics.forward_excl[t + 1].T, metrics.backward[t + 1][None, :]),
                      axis=1)
        comp_log = metrics.forward_log[t + 1] + metrics.backward_log[t + 1]
    elif method == "branches":
        contrib = sr.ext(metrics.forward[t][ker.pred[t]], table.values[t][:, None])
        full = sr.ext(contrib, metrics.backward[t + 1][None, :])
        masked = np.where(ker.mask[:, :, None], full[None, :, :], sr.combine_identity)
        comp = sr.red(masked.reshape(table.q - 1, -1), axis=1)
        comp_log = pair_log + table.log_offsets[t]
    else:
        raise ValueError(f"unknown method {method!r}")
    return sym, pair_log, comp, comp_log


def _to_cost_units(vals: np.ndarray, log_off: float, kappa: float, minsum: bool) -> np.ndarray:
    if minsum:
        return -vals
    with np.errstate(divide="ignore"):
        out = (np.log(vals) + log_off) / kappa
    if np.isnan(out).any():
        raise FloatingPointError("sum-product marginal overflowed")
    return out


def position_marginals(code: SpcCode, edge_costs, kappa: float, position: int,
                       method: str = "states") -> tuple[np.ndarray, np.ndarray]:
    """Cost-unit (symbol, complement) marginal vectors over a != 0 at one
    position. See the module docstring for the kappa = inf convention."""
    minsum = math.isinf(kappa)
    sr = semiring_for_kappa(kappa)
    costs = -np.asarray(edge_costs, dtype=float) if minsum else edge_costs
    table = build_branch_metrics(code, costs, sr, kappa=None if minsum else kappa)
    metrics = compute_metrics(table, with_excluded=(method == "states"))
    sym, sym_log, comp, comp_log = _marginal_vectors(metrics, table, position, method)
    return (
        _to_cost_units(sym, sym_log, kappa, minsum),
        _to_cost_units(comp, comp_log, kappa, minsum),
    )


def all_marginals(code: SpcCode, edge_costs, kappa: float,
                  method: str = "states") -> CheckMarginals:
    """Both cost-unit marginals for every position and nonzero symbol.

    One forward sweep, one backward sweep, one excluded-forward sweep, then
    d*(q-1) pair reads: O(d * q^2) semiring work total.
    """
    minsum = math.isinf(kappa)
    sr = semiring_for_kappa(kappa)
    costs = -np.asarray(edge_costs, dtype=float) if minsum else edge_costs
    table = build_branch_metrics(code, costs, sr, kappa=None if minsum else kappa)
    metrics = compute_metrics(table, with_excluded=(method == "states"))
    d, q = table.degree, table.q
    sym_out = np.empty((d, q - 1))
    comp_out = np.empty((d, q - 1))
    for t in range(d):
        sym, sym_log, comp, comp_log = _marginal_vectors(metrics, table, t, method)
        sym_out[t] = _to_cost_units(sym, sym_log, kappa, minsum)
        comp_out[t] = _to_cost_units(comp, comp_log, kappa, minsum)
    return CheckMarginals(symbol=sym_out, complement=comp_out)


def total_mass(code: SpcCode, edge_costs, kappa: float) -> float:
    """Cost-unit aggregate of the full score over all codewords of the row:
    (1/kappa) log sum exp(kappa * score) for finite kappa, max score for
    kappa = inf."""
    minsum = math.isinf(kappa)
    sr = semiring_for_kappa(kappa)
    costs = -np.asarray(edge_costs, dtype=float) if minsum else edge_costs
    table = build_branch_metrics(code, costs, sr, kappa=None if minsum else kappa)
    fwd, flog = forward_metrics(table)
    d = table.degree
    if minsum:
        return -float(fwd[d, 0])
    with np.errstate(divide="ignore"):
        return float((math.log(fwd[d, 0]) if fwd[d, 0] > 0 else -math.inf) + flog[d]) / kappa


def min_cost_marginals(code: SpcCode, cost_table) -> np.ndarray:
    """Min-cost exclusive marginals for every position and every symbol
    (zero included): entry [t, b] is the minimum, over codewords with symbol
    b at position t, of the summed costs of the other positions.

    ``cost_table`` holds relative costs, shape (d, q-1), with symbol zero
    implicitly free. This is the check-node computation of the min-sum
    decoder, run on the same trellis.
    """
    table = build_branch_metrics(code, cost_table, MIN_SUM)
    metrics = compute_metrics(table)
    sr = MIN_SUM
    ker = _kernel(table.q, table.coefficients)
    d, q = table.degree, table.q
    out = np.empty((d, q))
    for t in range(d):
        gathered = metrics.backward[t + 1][ker.succ[t]]  # (q, q): [b, s]
        out[t] = sr.red(sr.ext(metrics.forward[t][None, :], gathered), axis=1)
    return out
