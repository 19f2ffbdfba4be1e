"""Command-line interface: Monte-Carlo sweeps, alist validation, and the
oracle self-test.

Exit codes: 0 on success, 1 for configuration or content errors, 2 for I/O
errors.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import oracle, sim
from .code import AlistError, load_graph


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # config errors exit 1, not 2
        raise CliError(message)


def _parse_kappa(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    value = float(text)
    if not value > 0:
        raise CliError(f"kappa must be positive, got {text}")
    return value


def _parse_ebn0(text: str) -> tuple[float, ...]:
    """Either a comma list "a,b,c" or a range "start:stop:step" (inclusive)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise CliError("range step must be positive")
        values = []
        v = start
        while v <= stop + 1e-9:
            values.append(round(v, 9))
            v += step
        return tuple(values)
    return tuple(float(p) for p in text.split(","))


def build_parser() -> _Parser:
    parser = _Parser(prog="nbldpc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="Monte-Carlo FER sweep")
    p_sim.add_argument("--code", required=True, help="alist file of the code")
    p_sim.add_argument("--decoder", choices=["lclp", "ms", "both"], default="lclp")
    p_sim.add_argument("--kappa", default="inf",
                       help="smoothing parameter for the dual decoder, or 'inf'")
    p_sim.add_argument("--ebn0", required=True,
                       help="Eb/N0 points in dB: 'a,b,c' or 'start:stop:step'")
    p_sim.add_argument("--max-iters", type=int, default=64)
    p_sim.add_argument("--target-errors", type=int, default=100)
    p_sim.add_argument("--max-frames", type=int, default=1_000_000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", default=None, help="CSV output path (appended, resumable)")
    p_sim.add_argument("--jobs", type=int, default=1)

    p_check = sub.add_parser("check", help="validate an alist file")
    p_check.add_argument("--code", required=True)

    p_self = sub.add_parser("oracle-selftest",
                            help="trellis marginals vs brute-force enumeration")
    p_self.add_argument("--trials", type=int, default=20)
    p_self.add_argument("--seed", type=int, default=0)

    return parser


def _cmd_simulate(args) -> int:
    config = sim.SimConfig(
        code_path=args.code,
        decoder=args.decoder,
        kappa=_parse_kappa(args.kappa),
        ebn0_list_db=_parse_ebn0(args.ebn0),
        max_iterations=args.max_iters,
        target_frame_errors=args.target_errors,
        max_frames=args.max_frames,
        base_seed=args.seed,
        output_path=args.out,
        jobs=args.jobs,
    )
    records = sim.run_sweep(config)
    print(sim.CSV_HEADER)
    for record in records:
        print(record.csv_row())
    return 0


def _cmd_check(args) -> int:
    graph = load_graph(args.code)
    row_degrees = [len(s) for s in graph.row_support]
    col_degrees = [len(s) for s in graph.col_support]
    print(f"{args.code}: OK")
    print(f"  n={graph.n} m={graph.m} q={graph.q} edges={graph.num_edges}")
    print(f"  column degrees {min(col_degrees)}..{max(col_degrees)}, "
          f"row degrees {min(row_degrees)}..{max(row_degrees)}")
    return 0


def _cmd_selftest(args) -> int:
    ok = oracle.selftest(trials=args.trials, seed=args.seed, verbose=True)
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_selftest(args)
    except (CliError, AlistError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
