"""Arithmetic over Z_q, indicator embeddings, the soft minimum, and semirings.

Everything in this module is pure and immutable; the modulus q travels with
the values (``RingElement``) or is passed explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

__all__ = [
    "RingElement",
    "ring_add",
    "ring_mul",
    "xi",
    "big_xi",
    "soft_min",
    "OpCounter",
    "Semiring",
    "SUM_PRODUCT",
    "MIN_SUM",
    "semiring_for_kappa",
]


@dataclass(frozen=True)
class RingElement:
    """An integer residue in Z_q; the value is always reduced modulo q."""

    value: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError(f"modulus must be at least 2, got {self.q}")
        object.__setattr__(self, "value", int(self.value) % self.q)

    def _same_ring(self, other: "RingElement") -> None:
        if not isinstance(other, RingElement):
            raise TypeError(f"expected RingElement, got {type(other).__name__}")
        if other.q != self.q:
            raise ValueError(f"modulus mismatch: {self.q} vs {other.q}")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._same_ring(other)
        return RingElement(self.value + other.value, self.q)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._same_ring(other)
        return RingElement(self.value - other.value, self.q)

    def __neg__(self) -> "RingElement":
        return RingElement(-self.value, self.q)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._same_ring(other)
        return RingElement(self.value * other.value, self.q)

    def is_unit(self) -> bool:
        return math.gcd(self.value, self.q) == 1

    def inverse(self) -> "RingElement":
        if not self.is_unit():
            raise ValueError(f"{self.value} is not a unit modulo {self.q}")
        return RingElement(pow(self.value, -1, self.q), self.q)

    def __int__(self) -> int:
        return self.value


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    """(a + b) mod q; the operands must share the modulus."""
    return a + b


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    """(a * b) mod q; the operands must share the modulus."""
    return a * b


def xi(alpha: RingElement) -> np.ndarray:
    """Indicator embedding of a ring element into {0,1}^(q-1).

    Component rho (for rho = 1..q-1 in ascending residue order) is 1 exactly
    when rho equals the element; zero maps to the all-zero vector.
    """
    vec = np.zeros(alpha.q - 1, dtype=np.int8)
    if alpha.value != 0:
        vec[alpha.value - 1] = 1
    return vec


def big_xi(word: Sequence[RingElement]) -> np.ndarray:
    """Position-wise indicator embedding of a word, stacked as a (t, q-1) array."""
    if len(word) == 0:
        return np.zeros((0, 0), dtype=np.int8)
    return np.stack([xi(sym) for sym in word])


def soft_min(values, kappa: float) -> float:
    """Smooth minimum -(1/kappa) log sum exp(-kappa z); plain min for kappa=inf.

    The minimum is factored out before exponentiating, so the evaluation does
    not overflow even for very large kappa. The result never exceeds the true
    minimum, and the gap is at most log(len(values))/kappa.
    """
    z = np.asarray(values, dtype=float)
    if z.size == 0:
        raise ValueError("soft_min of an empty sequence")
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    m = float(z.min())
    if math.isinf(kappa):
        return m
    return m - math.log(float(np.exp(-kappa * (z - m)).sum())) / kappa


class OpCounter:
    """Mutable scalar-operation tally attached to an instrumented semiring."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def add(self, n: int) -> None:
        self.count += n


@dataclass(frozen=True)
class Semiring:
    """A pair of associative operations with identities.

    ``combine`` plays the role of addition and ``extend`` the role of
    multiplication; ``extend`` distributes over ``combine``. Both are numpy
    ufuncs so they apply elementwise to metric arrays.
    """

    name: str
    combine: np.ufunc
    extend: np.ufunc
    combine_identity: float
    extend_identity: float
    ops: OpCounter | None = None

    def ext(self, a, b):
        out = self.extend(a, b)
        if self.ops is not None:
            self.ops.add(int(np.size(out)))
        return out

    def red(self, arr, axis):
        out = self.combine.reduce(arr, axis=axis)
        if self.ops is not None:
            self.ops.add(int(np.size(arr)))
        return out

    def counting(self) -> "Semiring":
        """A copy of this semiring that tallies scalar operations in .ops."""
        return replace(self, ops=OpCounter())


SUM_PRODUCT = Semiring("sum-product", np.add, np.multiply, 0.0, 1.0)
MIN_SUM = Semiring("min-sum", np.minimum, np.add, math.inf, 0.0)


def semiring_for_kappa(kappa: float) -> Semiring:
    """Sum-product for finite kappa, min-sum for kappa = inf."""
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    return MIN_SUM if math.isinf(kappa) else SUM_PRODUCT
