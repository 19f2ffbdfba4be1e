"""Brute-force reference marginals by direct codeword enumeration.

These are the ground truth the trellis engine is tested against. No state
metrics, no recursions: every codeword of the row is enumerated (or
materialized as a dense tensor over the free symbol positions) and the
marginal is reduced straight over that set.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .code import SpcCode, TannerGraph, enumerate_spc_codewords, syndrome

__all__ = [
    "OracleLimits",
    "DEFAULT_LIMITS",
    "brute_marginal_alpha",
    "brute_marginal_not_alpha",
    "brute_all_marginals",
    "brute_all_marginals_multi",
    "brute_best_codeword",
    "selftest",
]


@dataclass(frozen=True)
class OracleLimits:
    max_row_degree: int = 10
    max_q: int = 8
    max_enumeration: int = 10_000_000


DEFAULT_LIMITS = OracleLimits()


def _check_limits(code: SpcCode, limits: OracleLimits) -> None:
    d = len(code)
    if d > limits.max_row_degree:
        raise ValueError(f"row degree {d} exceeds oracle guard {limits.max_row_degree}")
    if code.q > limits.max_q:
        raise ValueError(f"q={code.q} exceeds oracle guard {limits.max_q}")
    if code.q ** max(d - 1, 0) > limits.max_enumeration:
        raise ValueError("enumeration size exceeds oracle guard")


def _full_costs(code: SpcCode, costs) -> np.ndarray:
    arr = np.asarray(costs, dtype=float)
    if arr.shape != (len(code), code.q - 1):
        raise ValueError(f"expected costs of shape {(len(code), code.q - 1)}, got {arr.shape}")
    full = np.zeros((len(code), code.q))
    full[:, 1:] = arr
    return full


def _codewords_and_scores(code: SpcCode, full: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    words = np.array(list(enumerate_spc_codewords(code)), dtype=np.int64)
    scores = full[np.arange(len(code))[None, :], words].sum(axis=1)
    return words, scores


def _lse(vals: np.ndarray, kappa: float) -> float:
    """(1/kappa) log sum exp(kappa * vals); -inf for an empty set."""
    if vals.size == 0:
        return -math.inf
    m = float(vals.max())
    return m + math.log(float(np.exp(kappa * (vals - m)).sum())) / kappa


def brute_marginal_not_alpha(code: SpcCode, costs, i: int, alpha: int, kappa: float,
                             limits: OracleLimits = DEFAULT_LIMITS) -> float:
    """Aggregate full score over codewords whose symbol at position i differs
    from alpha: (1/kappa) log sum exp(kappa * score) for finite kappa, the
    maximum score for kappa = inf."""
    _check_limits(code, limits)
    full = _full_costs(code, costs)
    words, scores = _codewords_and_scores(code, full)
    sel = scores[words[:, i] != alpha]
    if math.isinf(kappa):
        return float(sel.max()) if sel.size else -math.inf
    return _lse(sel, kappa)


def brute_marginal_alpha(code: SpcCode, costs, i: int, alpha: int, kappa: float,
                         limits: OracleLimits = DEFAULT_LIMITS) -> float:
    """Aggregate over codewords with symbol alpha at position i, the score at
    position i itself excluded."""
    _check_limits(code, limits)
    full = _full_costs(code, costs)
    words, scores = _codewords_and_scores(code, full)
    sel = scores[words[:, i] == alpha] - full[i, alpha]
    if math.isinf(kappa):
        return float(sel.max()) if sel.size else -math.inf
    return _lse(sel, kappa)


# ---------------------------------------------------------------------------
# Vectorized whole-row oracle


@lru_cache(maxsize=64)
def _digit_axes(q: int, k: int) -> tuple[np.ndarray, ...]:
    """Digit-value arrays broadcastable along each of k tensor axes."""
    base = np.arange(q, dtype=np.int64)
    return tuple(
        base.reshape(tuple(q if r == t else 1 for r in range(k))) for t in range(k)
    )


def _masked_lse_rows(groups: np.ndarray, kappa: float) -> np.ndarray:
    """Row a-1 of the result: (1/kappa) log sum over entries != a of
    exp(kappa * groups)."""
    q = groups.shape[0]
    out = np.empty(q - 1)
    for a in range(1, q):
        out[a - 1] = _lse(np.delete(groups, a), kappa)
    return out


def brute_all_marginals_multi(code: SpcCode, costs, kappas,
                              limits: OracleLimits = DEFAULT_LIMITS) -> dict:
    """Both marginals for every (position, symbol) at several kappas, still by
    enumeration; the score tensor is materialized once and reduced per kappa.

    For rows whose last coefficient is a unit the full score tensor over the
    d-1 free positions is built directly; otherwise the per-pair functions
    are called position by position. Each dict value is a pair of (d, q-1)
    arrays: (symbol-constrained, complement).
    """
    _check_limits(code, limits)
    d, q = len(code), code.q
    if d < 2 or math.gcd(code.coefficients[-1], q) != 1:
        return {
            kappa: (
                np.array([[brute_marginal_alpha(code, costs, t, a, kappa, limits)
                           for a in range(1, q)] for t in range(d)]),
                np.array([[brute_marginal_not_alpha(code, costs, t, a, kappa, limits)
                           for a in range(1, q)] for t in range(d)]),
            )
            for kappa in kappas
        }

    full = _full_costs(code, costs)
    h = code.coefficients
    k = d - 1
    digits = _digit_axes(q, k)
    total = np.zeros((q,) * k)
    presyn = np.zeros((q,) * k, dtype=np.int64)
    for t in range(k):
        total = total + full[t][digits[t]]
        presyn = presyn + h[t] * digits[t]
    presyn = presyn % q
    lut = (-np.arange(q) * pow(h[-1], -1, q)) % q  # partial sum -> last symbol
    total = total + full[d - 1][lut][presyn]

    out = {}
    for kappa in kappas:
        # Per-position grouped aggregates over all q symbol values.
        grouped = np.empty((d, q))
        minsum = math.isinf(kappa)
        if minsum:
            for t in range(k):
                axes = tuple(r for r in range(k) if r != t)
                grouped[t] = total.max(axis=axes) if axes else total
            by_syn = np.array([
                np.where(presyn == s, total, -np.inf).max() for s in range(q)
            ])
            grouped[d - 1][lut] = by_syn
        else:
            m = float(total.max())
            w = np.exp(kappa * (total - m))
            with np.errstate(divide="ignore"):
                for t in range(k):
                    axes = tuple(r for r in range(k) if r != t)
                    sums = w.sum(axis=axes) if axes else w
                    grouped[t] = m + np.log(sums) / kappa
                by_syn = np.bincount(presyn.ravel(), weights=w.ravel(), minlength=q)
                grouped[d - 1][lut] = m + np.log(by_syn) / kappa

        sym = grouped[:, 1:] - full[:, 1:]
        comp = np.empty((d, q - 1))
        for t in range(d):
            if minsum:
                comp[t] = [np.delete(grouped[t], a).max() for a in range(1, q)]
            else:
                comp[t] = _masked_lse_rows(grouped[t], kappa)
        out[kappa] = (sym, comp)
    return out


def brute_all_marginals(code: SpcCode, costs, kappa: float,
                        limits: OracleLimits = DEFAULT_LIMITS):
    """Single-kappa form of brute_all_marginals_multi."""
    return brute_all_marginals_multi(code, costs, (kappa,), limits)[kappa]


def brute_best_codeword(graph: TannerGraph, cost_table,
                        max_words: int = 1_000_000) -> np.ndarray:
    """Exhaustive minimum-cost zero-syndrome word; ties go to the
    lexicographically smallest. cost_table has shape (n, q) with per-symbol
    costs (column 0 is the cost of symbol zero)."""
    n, q = graph.n, graph.q
    if q ** n > max_words:
        raise ValueError(f"q^n = {q ** n} exceeds guard {max_words}")
    table = np.asarray(cost_table, dtype=float)
    if table.shape != (n, q):
        raise ValueError(f"expected cost table of shape {(n, q)}, got {table.shape}")
    best_word: tuple[int, ...] | None = None
    best_cost = math.inf
    for word in itertools.product(range(q), repeat=n):
        if np.any(syndrome(word, graph)):
            continue
        cost = float(table[np.arange(n), word].sum())
        if cost < best_cost:
            best_cost = cost
            best_word = word
    assert best_word is not None  # the all-zero word always qualifies
    return np.array(best_word, dtype=np.int64)


def selftest(trials: int = 20, seed: int = 0, verbose: bool = True) -> bool:
    """Randomized oracle-vs-trellis agreement run, used by the CLI.

    Draws random rows (q in {2, 4, 8}, degrees 2..8, unit last coefficient),
    random costs, and checks the trellis marginals against brute enumeration
    for finite and infinite kappa.
    """
    from . import trellis  # local import: oracle stays free of trellis logic

    rng = np.random.default_rng(seed)
    worst = 0.0
    checks = 0
    for q in (2, 4, 8):
        units = [v for v in range(1, q) if math.gcd(v, q) == 1]
        for _ in range(trials):
            d = int(rng.integers(2, 7))
            coeffs = [int(rng.integers(1, q)) for _ in range(d - 1)]
            coeffs.append(int(rng.choice(units)))
            code = SpcCode(tuple(range(d)), tuple(coeffs), q)
            costs = rng.normal(size=(d, q - 1))
            for kappa in (0.5, 2.0, math.inf):
                got = trellis.all_marginals(code, costs, kappa)
                want_sym, want_comp = brute_all_marginals(code, costs, kappa)
                err = 0.0
                for a, b in ((got.symbol, want_sym), (got.complement, want_comp)):
                    if (np.isneginf(a) != np.isneginf(b)).any():
                        err = math.inf
                        break
                    both_ninf = np.isneginf(a) & np.isneginf(b)
                    with np.errstate(invalid="ignore"):
                        diff = np.abs(np.where(both_ninf, 0.0, a - b))
                    err = max(err, float(diff.max()))
                worst = max(worst, err)
                checks += 1
                if err > 1e-8:
                    if verbose:
                        print(f"FAIL q={q} d={d} kappa={kappa} err={err:.3e}")
                    return False
    if verbose:
        print(f"oracle selftest: {checks} instances OK, worst |error| = {worst:.3e}")
    return True
