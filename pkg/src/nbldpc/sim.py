"""Monte-Carlo frame-error-rate harness.

Each frame is simulated independently from a generator seeded with
base_seed + frame index, so results are identical whatever the worker count
and runs can be chopped up or resumed freely. A point stops at the first
frame index where the target frame-error count is reached (or at the frame
cap), scanning frames in index order regardless of how they were computed.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import channel, lclp, minsum
from .code import TannerGraph, load_graph

__all__ = ["SimConfig", "SimRecord", "run_point", "run_sweep", "CSV_HEADER"]

CSV_HEADER = (
    "decoder,ebn0_db,frames,frame_errors,symbol_errors,fer,ser,"
    "mean_iterations,wall_seconds"
)

_DECODERS = ("lclp", "ms")


@dataclass(frozen=True)
class SimConfig:
    code_path: str
    decoder: str = "lclp"  # "lclp", "ms", or "both"
    kappa: float = math.inf
    ebn0_list_db: tuple[float, ...] = ()
    max_iterations: int = 64
    target_frame_errors: int = 100
    max_frames: int = 1_000_000
    base_seed: int = 0
    output_path: str | None = None
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.decoder not in (*_DECODERS, "both"):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if not self.ebn0_list_db:
            raise ValueError("ebn0_list_db must be nonempty")
        if self.max_iterations < 1 or self.target_frame_errors < 1 or self.max_frames < 1:
            raise ValueError("iteration, error, and frame caps must be positive")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")

    def decoders(self) -> tuple[str, ...]:
        return _DECODERS if self.decoder == "both" else (self.decoder,)


@dataclass(frozen=True)
class SimRecord:
    decoder: str
    ebn0_db: float
    frames: int
    frame_errors: int
    symbol_errors: int
    fer: float
    ser: float
    mean_iterations: float
    wall_seconds: float

    def csv_row(self) -> str:
        return (
            f"{self.decoder},{self.ebn0_db:.10g},{self.frames},{self.frame_errors},"
            f"{self.symbol_errors},{self.fer:.10g},{self.ser:.10g},"
            f"{self.mean_iterations:.10g},{self.wall_seconds:.6f}"
        )


def _simulate_frames(graph: TannerGraph, decoder: str, kappa: float, max_iterations: int,
                     sigma: float, base_seed: int, start: int, stop: int,
                     codeword=None) -> list[tuple[bool, int, int]]:
    """Per-frame (frame_error, symbol_errors, iterations) for a frame range."""
    cfg = channel.ChannelConfig(noise_sigma=sigma)
    sent = np.zeros(graph.n, dtype=np.int64) if codeword is None else np.asarray(codeword)
    tx = channel.modulate(sent, cfg)
    out = []
    for idx in range(start, stop):
        rng = np.random.default_rng(base_seed + idx)
        rx = channel.add_noise(tx, cfg, rng)
        costs = channel.llr(rx, cfg)
        if decoder == "lclp":
            result = lclp.decode(graph, costs, kappa=kappa, max_iterations=max_iterations)
        else:
            result = minsum.decode(graph, costs, max_iterations=max_iterations)
        wrong = int((result.word != sent).sum())
        out.append((wrong > 0, wrong, result.iterations_used))
    return out


def run_point(config: SimConfig, ebn0_db: float, decoder: str,
              graph: TannerGraph | None = None, codeword=None) -> SimRecord:
    """Simulate one (Eb/N0, decoder) point until the frame-error target or
    the frame cap. The all-zero codeword is transmitted unless an explicit
    word is supplied."""
    if decoder not in _DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")
    g = load_graph(config.code_path) if graph is None else graph
    rate = (g.n - g.m) / g.n
    sigma = channel.ebn0_to_sigma(ebn0_db, rate, math.log2(g.q))
    t0 = time.perf_counter()

    results: list[tuple[bool, int, int]] = []
    frames = frame_errors = symbol_errors = 0
    iteration_sum = 0
    done = False

    block = max(16, 8 * config.jobs)
    start = 0
    pool = ProcessPoolExecutor(max_workers=config.jobs) if config.jobs > 1 else None
    try:
        while not done and start < config.max_frames:
            stop = min(start + block * (config.jobs if pool else 1), config.max_frames)
            args = (g, decoder, config.kappa, config.max_iterations, sigma,
                    config.base_seed)
            if pool is None:
                results = _simulate_frames(*args, start, stop, codeword)
            else:
                bounds = np.linspace(start, stop, config.jobs + 1).astype(int)
                futures = [
                    pool.submit(_simulate_frames, *args, int(a), int(b), codeword)
                    for a, b in zip(bounds[:-1], bounds[1:])
                ]
                results = [row for fut in futures for row in fut.result()]
            # Scan in frame order so the stopping frame count is independent
            # of how the block was split across workers.
            for err, wrong, iters in results:
                frames += 1
                frame_errors += int(err)
                symbol_errors += wrong
                iteration_sum += iters
                if frame_errors >= config.target_frame_errors or frames >= config.max_frames:
                    done = True
                    break
            start = stop
    finally:
        if pool is not None:
            pool.shutdown()

    wall = time.perf_counter() - t0
    return SimRecord(
        decoder=decoder,
        ebn0_db=float(ebn0_db),
        frames=frames,
        frame_errors=frame_errors,
        symbol_errors=symbol_errors,
        fer=frame_errors / frames,
        ser=symbol_errors / (frames * g.n),
        mean_iterations=iteration_sum / frames,
        wall_seconds=wall,
    )


def _completed_points(path: str) -> set[tuple[str, float]]:
    done = set()
    if path and os.path.exists(path):
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                done.add((row["decoder"], round(float(row["ebn0_db"]), 9)))
    return done


def run_sweep(config: SimConfig, graph: TannerGraph | None = None) -> list[SimRecord]:
    """Run every requested (point, decoder) pair, appending each finished
    record to the output CSV. Points already present in an existing output
    file are skipped, so an interrupted sweep resumes where it stopped."""
    g = load_graph(config.code_path) if graph is None else graph
    done = _completed_points(config.output_path) if config.output_path else set()
    records = []
    for ebn0 in config.ebn0_list_db:
        for decoder in config.decoders():
            if (decoder, round(float(ebn0), 9)) in done:
                continue
            record = run_point(config, ebn0, decoder, graph=g)
            records.append(record)
            if config.output_path:
                _append_record(config.output_path, record)
    return records


def _append_record(path: str, record: SimRecord) -> None:
    new_file = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        if new_file:
            fh.write(CSV_HEADER + "\n")
        fh.write(record.csv_row() + "\n")
