"""Command-line benchmark driver.

Two jobs, composable in one invocation:

* ``--generate KIND`` synthesizes a stream (``gnp``, ``planted_core``, or
  ``insert_then_delete``).  Without ``--mode`` the stream text goes to
  stdout for later replay.
* ``--mode NAME`` replays a stream (from ``--input`` or the generator)
  through one engine, validating answers against an exact oracle, and
  writes metrics CSV to ``--metrics-out`` (default stdout).

Exit status: 2 for a malformed stream or bad arguments, 3 when
``--fail-on-mismatch`` is set and any oracle disagreement was seen.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import BadParamsError, MalformedUpdateError
from .metrics import write_csv
from .runner import MODES, RunConfig, run_stream
from .streams import (gen_gnp, gen_insert_then_delete, gen_planted_core,
                      read_stream, validate_updates, write_stream)

GENERATORS = ("gnp", "planted_core", "insert_then_delete")


def _quiet_pipe() -> None:
    # consumer closed stdout early (head, a pager); swap in devnull so the
    # interpreter's shutdown flush does not raise a second time
    os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hybridconn",
        description="Dynamic-connectivity benchmark harness.")
    ap.add_argument("--input", help="stream file to replay")
    ap.add_argument("--mode", choices=MODES, help="engine to replay through")
    ap.add_argument("--generate", choices=GENERATORS,
                    help="synthesize a stream instead of reading one")
    ap.add_argument("--v", type=int, default=1024, help="vertex count for --generate")
    ap.add_argument("--edges", type=int, help="edge count (gnp, insert_then_delete)")
    ap.add_argument("--p", type=float, help="edge probability (gnp, planted_core periphery)")
    ap.add_argument("--core-size", type=int, help="planted core vertex count")
    ap.add_argument("--core-p", type=float, help="planted core edge probability")
    ap.add_argument("--delta-mult", type=int, default=25,
                    help="density threshold multiplier on log2 V")
    ap.add_argument("--demote-div", type=int, default=2, choices=(2, 8),
                    help="demotion threshold divisor on the density threshold")
    ap.add_argument("--tiers", type=int, help="sketch engine tier count override")
    ap.add_argument("--columns", type=int, help="streaming sketch column count override")
    ap.add_argument("--buffer", type=int, default=1024,
                    help="dense update buffer capacity (0 disables)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--checkpoint-every", type=int, default=1000,
                    help="updates between metrics rows (0: one final row)")
    ap.add_argument("--metrics-out", help="CSV path (default stdout)")
    ap.add_argument("--fail-on-mismatch", action="store_true",
                    help="exit 3 if the engine ever disagrees with the oracle")
    ap.add_argument("--no-timing", action="store_true",
                    help="zero the timing columns so output is byte-reproducible")
    return ap


def _generate(args) -> list:
    if args.generate == "gnp":
        return gen_gnp(args.v, args.seed, p=args.p, edges=args.edges)
    if args.generate == "planted_core":
        if args.core_size is None or args.core_p is None or args.p is None:
            raise BadParamsError("planted_core needs --core-size, --core-p, and --p")
        return gen_planted_core(args.v, args.seed, args.core_size,
                                args.core_p, args.p)
    if args.edges is None:
        raise BadParamsError("insert_then_delete needs --edges")
    return gen_insert_then_delete(args.v, args.seed, edge_count=args.edges)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.generate is None and args.input is None:
        print("error: need --input or --generate", file=sys.stderr)
        return 2
    try:
        if args.generate is not None:
            num_vertices = args.v
            ops = _generate(args)
        else:
            num_vertices, ops = read_stream(args.input)
            validate_updates(num_vertices, ops)
    except (BadParamsError, MalformedUpdateError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.mode is None:
        try:
            write_stream(sys.stdout, num_vertices, ops)
        except BrokenPipeError:
            _quiet_pipe()
        return 0

    cfg = RunConfig(seed=args.seed, delta_mult=args.delta_mult,
                    demote_div=args.demote_div, tiers=args.tiers,
                    columns=args.columns, buffer_capacity=args.buffer,
                    checkpoint_every=args.checkpoint_every,
                    timing=not args.no_timing)
    try:
        result = run_stream(args.mode, num_vertices, ops, cfg)
    except (BadParamsError, MalformedUpdateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.metrics_out:
        with open(args.metrics_out, "w", encoding="ascii") as fh:
            write_csv(fh, result.rows)
    else:
        try:
            write_csv(sys.stdout, result.rows)
        except BrokenPipeError:
            _quiet_pipe()
            return 0
    if result.queries:
        print(f"queries: {result.queries} mismatches: {result.mismatches}",
              file=sys.stderr)
    if args.fail_on_mismatch and result.mismatches:
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
