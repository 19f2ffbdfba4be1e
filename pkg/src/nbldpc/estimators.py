"""Scikit-learn style decoder frontends.

Both decoders are estimators whose hyperparameters (the code, the smoothing
parameter, the pass cap) live in the constructor; ``fit`` binds and validates
the parity-check structure and ``predict`` decodes one frame or a batch of
frames of channel cost vectors into symbol decisions. They clone and
grid-search like any other estimator via ``get_params``/``set_params``.
"""

from __future__ import annotations

import math
import os

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import lclp, minsum
from .base import DecodeResult
from .code import TannerGraph, load_graph

__all__ = ["LclpDecoder", "MinSumDecoder"]


def _as_graph(code) -> TannerGraph:
    if isinstance(code, TannerGraph):
        return code
    if isinstance(code, (str, os.PathLike)):
        return load_graph(code)
    raise TypeError(
        f"code must be a TannerGraph or a path to an alist file, got {type(code).__name__}"
    )


def _check_llr_frames(X, n: int, q: int) -> np.ndarray:
    """Validate and reshape channel costs to (frames, n, q-1)."""
    arr = np.asarray(X, dtype=float)
    width = n * (q - 1)
    if arr.ndim == 2 and arr.shape == (n, q - 1) and arr.shape[1] != width:
        arr = arr[None, :, :]
    elif arr.ndim == 2 and arr.shape[1] == width:
        arr = arr.reshape(arr.shape[0], n, q - 1)
    elif arr.ndim == 3 and arr.shape[1:] == (n, q - 1):
        pass
    else:
        raise ValueError(
            f"expected costs shaped ({n}, {q - 1}), (frames, {n}, {q - 1}) "
            f"or (frames, {width}), got {arr.shape}"
        )
    if not np.isfinite(arr).all():
        raise ValueError("channel costs must be finite")
    return arr


class _GraphDecoderMixin:
    def fit(self, X=None, y=None):
        """Bind the parity-check structure; X and y are ignored (the code is
        a constructor parameter)."""
        self._validate_params()
        graph = _as_graph(self.code)
        self.graph_ = graph
        self.n_symbols_ = graph.n
        self.q_ = graph.q
        return self

    def predict(self, X) -> np.ndarray:
        """Decode a frame (n, q-1) or a batch (frames, n, q-1) of channel
        costs into symbol decisions."""
        check_is_fitted(self, "graph_")
        frames = _check_llr_frames(X, self.n_symbols_, self.q_)
        single = np.asarray(X).ndim == 2 and np.asarray(X).shape == (self.n_symbols_, self.q_ - 1)
        words = np.stack([self._decode_one(frame).word for frame in frames])
        return words[0] if single and len(words) == 1 else words

    def decode(self, llr) -> DecodeResult:
        """Full decoding result (word, convergence, passes) for one frame."""
        check_is_fitted(self, "graph_")
        frame = _check_llr_frames(llr, self.n_symbols_, self.q_)
        if frame.shape[0] != 1:
            raise ValueError("decode() takes a single frame; use predict() for batches")
        return self._decode_one(frame[0])

    def _validate_params(self) -> None:
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


class LclpDecoder(_GraphDecoderMixin, BaseEstimator):
    """Dual coordinate-ascent LP decoder.

    Parameters: ``code`` (TannerGraph or alist path), ``kappa`` (positive
    smoothing parameter; inf for the plain-minimum mode), ``max_iter``
    (cap on full edge-update passes).
    """

    def __init__(self, code=None, kappa: float = math.inf, max_iter: int = 64):
        self.code = code
        self.kappa = kappa
        self.max_iter = max_iter

    def _validate_params(self) -> None:
        super()._validate_params()
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")

    def _decode_one(self, frame: np.ndarray) -> DecodeResult:
        return lclp.decode(self.graph_, frame, kappa=self.kappa,
                           max_iterations=self.max_iter)


class MinSumDecoder(_GraphDecoderMixin, BaseEstimator):
    """Min-sum decoder with trellis check-node processing.

    Parameters: ``code`` (TannerGraph or alist path) and ``max_iter``.
    """

    def __init__(self, code=None, max_iter: int = 64):
        self.code = code
        self.max_iter = max_iter

    def _decode_one(self, frame: np.ndarray) -> DecodeResult:
        return minsum.decode(self.graph_, frame, max_iterations=self.max_iter)
