"""Shared result type for the iterative decoders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["DecodeResult"]


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one decoding session.

    ``converged`` is True exactly when the returned word has zero syndrome;
    ``iterations_used`` counts full passes actually executed; the objective
    is reported by the dual decoder for finite kappa only.
    """

    word: np.ndarray
    converged: bool
    iterations_used: int
    final_objective: float | None = None
