"""Parity-check matrices over Z_q: Tanner graph structure, alist I/O,
local single-parity-check codes, syndromes, and binary-to-Z4 lifting.

Rows and columns are 0-indexed everywhere in the API; the alist text format
uses 1-based indices and is converted on the way in and out.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "AlistError",
    "TannerGraph",
    "SpcCode",
    "parse_alist",
    "load_graph",
    "emit_alist",
    "syndrome",
    "local_spc",
    "enumerate_spc_codewords",
    "lift_binary_graph",
]


class AlistError(ValueError):
    """Raised for malformed alist text."""


@dataclass(frozen=True)
class SpcCode:
    """One parity-check row: positions (ascending), matching nonzero
    coefficients, and the modulus."""

    positions: tuple[int, ...]
    coefficients: tuple[int, ...]
    q: int

    def __post_init__(self) -> None:
        if len(self.positions) != len(self.coefficients):
            raise ValueError("positions and coefficients must have equal length")
        if any(not 0 < c < self.q for c in self.coefficients):
            raise ValueError("coefficients must be nonzero residues")

    def __len__(self) -> int:
        return len(self.positions)


class TannerGraph:
    """Sparse parity-check structure over Z_q.

    Immutable after construction. Besides the row/column supports and
    coefficients, it precomputes an edge list in circular-schedule order
    (ascending row, then ascending column within each row), which the
    iterative decoders rely on.
    """

    def __init__(self, n: int, m: int, q: int, entries: Iterable[tuple[int, int, int]]):
        if n < 1 or m < 1:
            raise ValueError("n and m must be positive")
        if q < 2:
            raise ValueError("q must be at least 2")
        self.n = n
        self.m = m
        self.q = q

        coeff: dict[tuple[int, int], int] = {}
        for j, i, v in entries:
            if not 0 <= j < m:
                raise ValueError(f"row index {j} out of range")
            if not 0 <= i < n:
                raise ValueError(f"column index {i} out of range")
            if not 0 < v < q:
                raise ValueError(f"entry value {v} out of range for q={q}")
            if (j, i) in coeff:
                raise ValueError(f"duplicate entry at row {j}, column {i}")
            coeff[(j, i)] = v
        self._coeff = coeff

        rows: list[list[int]] = [[] for _ in range(m)]
        cols: list[list[int]] = [[] for _ in range(n)]
        for (j, i) in coeff:
            rows[j].append(i)
            cols[i].append(j)
        for j in range(m):
            if not rows[j]:
                raise ValueError(f"row {j} has no nonzero entries")
            rows[j].sort()
        for i in range(n):
            cols[i].sort()
        self.row_support = tuple(tuple(r) for r in rows)
        self.col_support = tuple(tuple(c) for c in cols)
        self.row_coeffs = tuple(tuple(coeff[(j, i)] for i in self.row_support[j]) for j in range(m))
        self.col_coeffs = tuple(tuple(coeff[(j, i)] for j in self.col_support[i]) for i in range(n))

        # Edge bookkeeping in circular-schedule order.
        edges = sorted(coeff)  # (j, i) ascending
        self.edge_check = np.array([j for j, _ in edges], dtype=np.int64)
        self.edge_var = np.array([i for _, i in edges], dtype=np.int64)
        self.edge_index = {e: k for k, e in enumerate(edges)}
        self.row_edge_ids = tuple(
            np.array([self.edge_index[(j, i)] for i in self.row_support[j]], dtype=np.int64)
            for j in range(m)
        )
        self.col_edge_ids = tuple(
            np.array([self.edge_index[(j, i)] for j in self.col_support[i]], dtype=np.int64)
            for i in range(n)
        )
        # Local position of each edge's variable inside its row support.
        pos = np.empty(len(edges), dtype=np.int64)
        for j in range(m):
            pos[self.row_edge_ids[j]] = np.arange(len(self.row_support[j]))
        self.edge_local_pos = pos

    @property
    def num_edges(self) -> int:
        return len(self.edge_var)

    def coeff(self, j: int, i: int) -> int:
        return self._coeff[(j, i)]

    def entries(self) -> list[tuple[int, int, int]]:
        return [(j, i, v) for (j, i), v in sorted(self._coeff.items())]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TannerGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and self.q == other.q
            and self._coeff == other._coeff
        )

    def __repr__(self) -> str:
        return f"TannerGraph(n={self.n}, m={self.m}, q={self.q}, edges={self.num_edges})"


# ---------------------------------------------------------------------------
# alist I/O


def _ints(line: str, what: str) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise AlistError(f"malformed {what}: {line!r}") from exc


def _parse_block(tokens: list[int], degree: int, paired: bool, index_limit: int, q: int,
                 kind: str, block_no: int) -> list[tuple[int, int]]:
    """One column or row block: `degree` entries, optionally padded with zeros."""
    width = 2 * degree if paired else degree
    if len(tokens) < width:
        raise AlistError(f"degree mismatch in {kind} block {block_no + 1}")
    if any(t != 0 for t in tokens[width:]):
        raise AlistError(f"degree mismatch in {kind} block {block_no + 1}")
    out = []
    for k in range(degree):
        if paired:
            idx, val = tokens[2 * k], tokens[2 * k + 1]
        else:
            idx, val = tokens[k], 1
        if idx == 0:
            # Padding where an entry was expected: the block is shorter than
            # the declared degree.
            raise AlistError(f"degree mismatch in {kind} block {block_no + 1}")
        if not 1 <= idx <= index_limit:
            raise AlistError(f"index {idx} out of range in {kind} block {block_no + 1}")
        if not 1 <= val <= q - 1:
            raise AlistError(f"entry value {val} out of range in {kind} block {block_no + 1}")
        out.append((idx - 1, val))
    return out


def parse_alist(text: str) -> TannerGraph:
    """Parse alist text into a TannerGraph.

    The nonbinary dialect stores (index, value) pairs in each block; the
    binary dialect (two-integer header, or q=2) stores bare indices. The
    declared maximum-degree line is treated as advisory; the per-column and
    per-row degree lists are binding.
    """
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if len(lines) < 4:
        raise AlistError("truncated file")
    header = _ints(lines[0], "header")
    if len(header) == 2:
        n, m, q = header[0], header[1], 2
        paired = False
    elif len(header) == 3:
        n, m, q = header
        paired = q > 2
    else:
        raise AlistError(f"malformed header: {lines[0]!r}")
    if n < 1 or m < 1 or q < 2:
        raise AlistError(f"malformed header: {lines[0]!r}")
    if len(lines) != 4 + n + m:
        raise AlistError(f"expected {4 + n + m} lines, found {len(lines)}")

    _ints(lines[1], "maximum-degree line")  # advisory only
    col_deg = _ints(lines[2], "column degree list")
    row_deg = _ints(lines[3], "row degree list")
    if len(col_deg) != n:
        raise AlistError("degree mismatch: column degree list length")
    if len(row_deg) != m:
        raise AlistError("degree mismatch: row degree list length")

    def read_block(line: str, degree: int, index_limit: int, kind: str, k: int):
        tokens = _ints(line, f"{kind} block")
        if q == 2:
            # A q=2 file may carry either bare indices or (index, 1) pairs.
            try:
                return _parse_block(tokens, degree, True, index_limit, q, kind, k)
            except AlistError:
                return _parse_block(tokens, degree, False, index_limit, q, kind, k)
        return _parse_block(tokens, degree, paired, index_limit, q, kind, k)

    col_entries: dict[tuple[int, int], int] = {}
    for i in range(n):
        block = read_block(lines[4 + i], col_deg[i], m, "column", i)
        for j, v in block:
            if (j, i) in col_entries:
                raise AlistError(f"duplicate row index in column {i + 1}")
            col_entries[(j, i)] = v

    row_entries: dict[tuple[int, int], int] = {}
    for j in range(m):
        block = read_block(lines[4 + n + j], row_deg[j], n, "row", j)
        for i, v in block:
            if (j, i) in row_entries:
                raise AlistError(f"duplicate column index in row {j + 1}")
            row_entries[(j, i)] = v

    if col_entries != row_entries:
        raise AlistError("row and column blocks disagree")
    try:
        return TannerGraph(n, m, q, [(j, i, v) for (j, i), v in col_entries.items()])
    except ValueError as exc:
        raise AlistError(str(exc)) from exc


def load_graph(path) -> TannerGraph:
    with open(path, "r", encoding="ascii") as fh:
        return parse_alist(fh.read())


def emit_alist(graph: TannerGraph) -> str:
    """Canonical nonbinary alist text for a graph (padded blocks, 1-based)."""
    max_col = max(len(s) for s in graph.col_support)
    max_row = max(len(s) for s in graph.row_support)
    out = [
        f"{graph.n} {graph.m} {graph.q}",
        f"{max_col} {max_row}",
        " ".join(str(len(s)) for s in graph.col_support),
        " ".join(str(len(s)) for s in graph.row_support),
    ]
    for i in range(graph.n):
        pairs = [f"{j + 1} {graph.coeff(j, i)}" for j in graph.col_support[i]]
        pairs += ["0 0"] * (max_col - len(pairs))
        out.append(" ".join(pairs))
    for j in range(graph.m):
        pairs = [f"{i + 1} {graph.coeff(j, i)}" for i in graph.row_support[j]]
        pairs += ["0 0"] * (max_row - len(pairs))
        out.append(" ".join(pairs))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Structure operations


def syndrome(word: Sequence[int], graph: TannerGraph) -> np.ndarray:
    """Per-row coefficient-weighted sums of a word, modulo q."""
    w = np.asarray(word, dtype=np.int64)
    if w.shape != (graph.n,):
        raise ValueError(f"word length {w.shape} does not match n={graph.n}")
    out = np.empty(graph.m, dtype=np.int64)
    for j in range(graph.m):
        idx = np.asarray(graph.row_support[j])
        cf = np.asarray(graph.row_coeffs[j])
        out[j] = int((w[idx] * cf).sum() % graph.q)
    return out


def local_spc(graph: TannerGraph, j: int) -> SpcCode:
    """The single-parity-check code of row j."""
    if not 0 <= j < graph.m:
        raise IndexError(f"row index {j} out of range for m={graph.m}")
    return SpcCode(graph.row_support[j], graph.row_coeffs[j], graph.q)


def enumerate_spc_codewords(code: SpcCode, *, max_degree: int = 10) -> Iterator[tuple[int, ...]]:
    """Yield every codeword of a single-parity-check code, without duplicates.

    When the last coefficient is a unit the last symbol is solved from the
    constraint (q^(d-1) words); otherwise all q^d tuples are filtered, which
    stays correct for zero-divisor coefficients.
    """
    d = len(code)
    if d > max_degree:
        raise ValueError(f"row degree {d} exceeds enumeration guard {max_degree}")
    q = code.q
    h = code.coefficients
    if math.gcd(h[-1], q) == 1:
        inv = pow(h[-1], -1, q)
        for prefix in itertools.product(range(q), repeat=d - 1):
            partial = sum(b * c for b, c in zip(prefix, h)) % q
            yield prefix + ((-partial * inv) % q,)
    else:
        for word in itertools.product(range(q), repeat=d):
            if sum(b * c for b, c in zip(word, h)) % q == 0:
                yield word


def lift_binary_graph(graph: TannerGraph, *, special_value: int = 3,
                      special_ranks: tuple[int, ...] = (1, 2)) -> TannerGraph:
    """Lift a binary parity-check matrix to Z4.

    Keeps the support and sets, within each row taken in ascending column
    order, the entries at ranks 1 and 2 (the second and third nonzeros) to 3
    and every other entry to 1. Rows too short to have those ranks get 3 at
    whichever of them exist.
    """
    if graph.q != 2:
        raise ValueError(f"expected a binary graph, got q={graph.q}")
    entries = []
    for j in range(graph.m):
        for rank, i in enumerate(graph.row_support[j]):
            entries.append((j, i, special_value if rank in special_ranks else 1))
    return TannerGraph(graph.n, graph.m, 4, entries)
