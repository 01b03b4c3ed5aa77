"""``parc`` command line: compress, decompress, inspect, analyze, bench.

Exit status: 0 success, 2 usage error, 3 I/O error, 4 corrupt archive.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile

from . import bench
from .codecs import codec_name, parse_codecs
from .container import decompress, inspect, write_archive
from .entropy import entropy_profile
from .errors import CorruptArchive
from .model import Sequence
from .partition import (
    DEFAULT_BLOCK,
    DEFAULT_HIGH_THRESHOLD,
    DEFAULT_LOW_THRESHOLD,
    DEFAULT_WINDOW,
    STRATEGIES,
    OptimizerConfig,
    make_plan,
)
from .partition.plan import CANDIDATE_MODES

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CORRUPT = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _add_plan_flags(p):
    p.add_argument("--strategy", choices=STRATEGIES, default="dp")
    p.add_argument("--codecs", default="raw,huffman,lzw",
                   help="comma-separated subset of raw,huffman,lzw")
    p.add_argument("--mode", choices=("ideal", "accounted"), default="accounted")
    p.add_argument("--block", type=_positive_int, default=DEFAULT_BLOCK,
                   help="block length for --strategy uniform")
    p.add_argument("--window", type=_positive_int, default=DEFAULT_WINDOW,
                   help="window length for --strategy entropic")
    p.add_argument("--low-threshold", type=float, default=DEFAULT_LOW_THRESHOLD)
    p.add_argument("--high-threshold", type=float, default=DEFAULT_HIGH_THRESHOLD)
    p.add_argument("--target-bits", type=float, default=None,
                   help="bit target C per segment (required by --strategy constrained)")
    p.add_argument("--min-seg", type=_positive_int, default=256)
    p.add_argument("--max-segs", type=_positive_int, default=None)
    p.add_argument("--candidates", choices=CANDIDATE_MODES, default="auto",
                   help="split-point candidates for dp/constrained")
    p.add_argument("--candidate-window", type=_positive_int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="write a PARC archive")
    p.add_argument("input")
    p.add_argument("output")
    _add_plan_flags(p)

    p = sub.add_parser("decompress", help="restore the original bytes")
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("inspect", help="print an archive's segment table")
    p.add_argument("input")

    p = sub.add_parser("analyze", help="write a sliding-window entropy profile as CSV")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--window", type=_positive_int, default=4096)
    p.add_argument("--stride", type=_positive_int, default=None,
                   help="defaults to the window length")

    p = sub.add_parser("bench", help="compare strategies on synthetic sources, CSV out")
    p.add_argument("output")
    p.add_argument("--config", help="source definitions (INI, see parc.synth)")
    p.add_argument("--seed", type=int, default=0, help="seed of the built-in sources")
    p.add_argument("--strategies", default=",".join(STRATEGIES))
    _add_plan_flags(p)
    return parser


def _config(args) -> OptimizerConfig:
    try:
        codecs = parse_codecs(args.codecs)
        if args.strategy == "constrained" and args.command == "compress" and args.target_bits is None:
            raise ValueError("--strategy constrained needs --target-bits")
        if args.target_bits is not None and args.target_bits <= 0:
            raise ValueError("--target-bits must be > 0")
        return OptimizerConfig(
            allowed_codecs=codecs,
            mode=args.mode,
            min_segment_length=args.min_seg,
            max_segments=args.max_segs,
            boundary_candidates=args.candidates,
            target_bits=args.target_bits,
            candidate_window=args.candidate_window,
            low_threshold=args.low_threshold,
            high_threshold=args.high_threshold,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


def _plan_params(args) -> dict:
    return dict(block=args.block, window=args.window,
                low_threshold=args.low_threshold, high_threshold=args.high_threshold)


def _read(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write_atomic(path, data) -> None:
    """Write through a temporary file in the target directory, then rename."""
    if isinstance(data, str):
        data = data.encode()
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".parc-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _print_plan(plan, out) -> None:
    r = plan.report
    print(f"mode            {plan.mode}", file=out)
    print(f"symbols         {r.total_length}", file=out)
    print(f"segments (k)    {plan.partition.segment_count}", file=out)
    print(f"total bits (T)  {r.total_bits}", file=out)
    print(f"overall rate R  {r.overall_rate:.6f} bits/symbol", file=out)
    print(f"lower bound     {r.lower_bound:.6f} bits/symbol", file=out)
    print(f"E (R squared)   {r.objective_square:.6f}", file=out)
    if r.objective_constrained is not None:
        print(f"E (target {r.target_bits:g}) {r.objective_constrained:.6f}", file=out)
    if r.per_segment:
        print(f"{'offset':>10} {'length':>10} {'codec':>8} {'weight':>8} "
              f"{'rate':>9} {'entropy':>9}", file=out)
        for off, seg in zip(plan.partition.offsets, r.per_segment):
            print(f"{off:>10} {seg.length:>10} {codec_name(seg.codec):>8} "
                  f"{seg.length / r.total_length:>8.4f} {seg.rate(plan.mode):>9.4f} "
                  f"{seg.empirical_entropy:>9.4f}", file=out)


def cmd_compress(args, out):
    cfg = _config(args)
    data = _read(args.input)
    plan = make_plan(data, args.strategy, cfg, **_plan_params(args))
    archive = write_archive(plan)
    _write_atomic(args.output, archive)
    _print_plan(plan, out)
    print(f"archive bytes   {len(archive)}", file=out)


def cmd_decompress(args, out):
    data = decompress(_read(args.input))
    _write_atomic(args.output, data)
    print(f"restored {len(data)} bytes", file=out)


def cmd_inspect(args, out):
    listing = inspect(_read(args.input))
    h = listing.header
    print(f"version         {h.version}", file=out)
    print(f"symbols         {h.original_length}", file=out)
    print(f"segments (k)    {listing.segment_count}", file=out)
    print(f"archive bytes   {listing.archive_bytes}", file=out)
    if not listing.entries:
        print("overall rate R  undefined (no segments)", file=out)
        return
    print(f"total bits (T)  {listing.total_bits} (accounted)", file=out)
    print(f"overall rate R  {listing.overall_rate:.6f} bits/symbol (accounted)", file=out)
    print(f"{'length':>10} {'codec':>8} {'weight':>8} {'model B':>8} "
          f"{'payload b':>10} {'rate':>9}", file=out)
    for e, w in zip(listing.entries, listing.weights):
        print(f"{e.segment_length:>10} {codec_name(e.codec_id):>8} {w:>8.4f} "
              f"{e.model_byte_length:>8} {e.payload_bit_length:>10} {e.accounted_rate:>9.4f}",
              file=out)


def cmd_analyze(args, out):
    seq = Sequence(_read(args.input))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["offset", "entropy_bits_per_symbol"])
    if seq.length:
        window = min(args.window, seq.length)
        profile = entropy_profile(seq, window, args.stride or window)
        for off, h in profile.values:
            writer.writerow([off, f"{h:.6f}"])
    _write_atomic(args.output, buf.getvalue())
    print(f"wrote {buf.getvalue().count(chr(10)) - 1} windows to {args.output}", file=out)


def cmd_bench(args, out):
    cfg = _config(args)
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    bad = [s for s in strategies if s not in STRATEGIES]
    if bad or not strategies:
        raise UsageError(f"unknown strategies: {', '.join(bad) or '(none)'}")
    if args.config:
        sources = bench.load_sources(_read(args.config).decode())
    else:
        sources = bench.default_sources(args.seed)
    rows = bench.run_bench(sources, cfg, strategies, **_plan_params(args))
    buf = io.StringIO()
    bench.write_csv(rows, buf)
    _write_atomic(args.output, buf.getvalue())
    for row in rows:
        print(f"{row['source']:>22} {row['strategy']:>11} k={row['k']:>4} "
              f"R={row['overall_rate']} bound={row['lower_bound']}", file=out)


COMMANDS = {
    "compress": cmd_compress,
    "decompress": cmd_decompress,
    "inspect": cmd_inspect,
    "analyze": cmd_analyze,
    "bench": cmd_bench,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"parc: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CorruptArchive as e:
        print(f"parc: corrupt archive: {e}", file=sys.stderr)
        return EXIT_CORRUPT
    except ValueError as e:
        print(f"parc: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"parc: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
