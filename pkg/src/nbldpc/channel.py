"""QPSK modulation of Z4 symbols, complex AWGN, and channel cost vectors.

Symbol a maps to the unit-circle point exp(1j * (pi/4 + a*pi/2)), i.e. the
four constellation points in natural order around the circle (no Gray
labeling). The channel cost vector of a received sample holds, per nonzero
symbol a, log p(y|0) - log p(y|a), which for a Gaussian channel reduces to a
difference of squared distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "qpsk_constellation",
    "ChannelConfig",
    "modulate",
    "add_noise",
    "llr",
    "ebn0_to_sigma",
]


def qpsk_constellation() -> np.ndarray:
    return np.exp(1j * (np.pi / 4 + np.arange(4) * np.pi / 2))


@dataclass(frozen=True)
class ChannelConfig:
    """Noise level, constellation, and base seed of one simulated channel."""

    noise_sigma: float
    constellation: np.ndarray = field(default_factory=qpsk_constellation)
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not self.noise_sigma > 0:
            raise ValueError(f"noise_sigma must be positive, got {self.noise_sigma}")
        energy = np.abs(np.asarray(self.constellation))
        if not np.allclose(energy, 1.0, atol=1e-9):
            raise ValueError("constellation points must have unit energy")

    @property
    def q(self) -> int:
        return len(self.constellation)


def modulate(word, config: ChannelConfig | None = None) -> np.ndarray:
    """Map ring symbols to constellation points."""
    cfg = config or ChannelConfig(noise_sigma=1.0)
    symbols = np.asarray(word, dtype=np.int64)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= cfg.q):
        raise ValueError(f"symbols must lie in 0..{cfg.q - 1} for this constellation")
    return np.asarray(cfg.constellation)[symbols]


def add_noise(samples, config: ChannelConfig, rng: np.random.Generator) -> np.ndarray:
    """Add circular complex Gaussian noise, variance sigma^2 per real
    dimension; deterministic for a given generator state."""
    x = np.asarray(samples, dtype=complex)
    noise = rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
    return x + config.noise_sigma * noise


def llr(y, config: ChannelConfig) -> np.ndarray:
    """Channel cost vectors: component a is (|y - s_a|^2 - |y - s_0|^2) / (2 sigma^2).

    Accepts a scalar sample (returns (q-1,)) or an array of samples (returns
    (..., q-1)). Positive entries favor symbol zero.
    """
    pts = np.asarray(config.constellation)
    ys = np.asarray(y, dtype=complex)
    d2 = np.abs(ys[..., None] - pts) ** 2
    out = (d2[..., 1:] - d2[..., :1]) / (2.0 * config.noise_sigma**2)
    return out


def ebn0_to_sigma(ebn0_db: float, rate: float, bits_per_channel_symbol: float) -> float:
    """Per-dimension noise standard deviation for a unit-energy constellation
    at the given energy-per-information-bit to noise-density ratio."""
    if not 0 < rate <= 1:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    if not bits_per_channel_symbol > 0:
        raise ValueError("bits_per_channel_symbol must be positive")
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    return math.sqrt(1.0 / (2.0 * rate * bits_per_channel_symbol * ebn0))
