"""Strategy x source comparison tables."""

from __future__ import annotations

import csv
import time
from dataclasses import replace

from . import synth
from .codecs import format_codecs
from .model import Sequence
from .partition import STRATEGIES, OptimizerConfig, make_plan

CSV_COLUMNS = ("source", "strategy", "codecs", "mode", "k", "overall_rate",
               "lower_bound", "wallclock_ms")

# used for the constrained strategy when no target is given
DEFAULT_TARGET_BITS = 8192.0

SKEWED_ALPHABET = b"etaoinshrdlucmfw"
SKEWED_WEIGHTS = tuple(2.0 ** -(i + 1) for i in range(15)) + (2.0 ** -15,)
PERIODIC_PHRASE = b"0123456789abcdef"


def piecewise_ab_cd(seed: int = 0, half: int = 10_000) -> Sequence:
    """``half`` uniform symbols over {a, b} followed by ``half`` over {c, d}."""
    spec = synth.piecewise([(half, synth.uniform(b"ab")), (half, synth.uniform(b"cd"))], seed)
    return synth.generate(spec)


def skewed(length: int, seed: int = 0) -> Sequence:
    """I.i.d. symbols with halving probabilities (entropy just under 2 bits)."""
    return synth.generate(synth.categorical(SKEWED_ALPHABET, SKEWED_WEIGHTS, seed), length)


def periodic(length: int) -> bytes:
    reps = -(-length // len(PERIODIC_PHRASE))
    return (PERIODIC_PHRASE * reps)[:length]


def periodic_then_skewed(seed: int = 0, half: int = 10_000) -> Sequence:
    """A stretch LZW codes well followed by one Huffman codes well."""
    return Sequence(periodic(half) + skewed(half, seed).data)


def default_sources(seed: int = 0) -> dict:
    return {
        "uniform_abcd": synth.generate(synth.uniform(b"abcd", seed), 20_000),
        "piecewise_ab_cd": piecewise_ab_cd(seed),
        "skewed": skewed(20_000, seed),
        "periodic_then_skewed": periodic_then_skewed(seed),
    }


def load_sources(text: str) -> dict:
    return {name: synth.generate(spec, n) for name, (spec, n) in synth.parse_sources(text).items()}


def run_bench(sources: dict, cfg: OptimizerConfig = OptimizerConfig(),
              strategies=STRATEGIES, **params) -> list:
    rows = []
    for name, seq in sources.items():
        for strategy in strategies:
            run_cfg = cfg
            if strategy == "constrained" and cfg.target_bits is None:
                run_cfg = replace(cfg, target_bits=DEFAULT_TARGET_BITS)
            start = time.perf_counter()
            plan = make_plan(seq, strategy, run_cfg, **params)
            elapsed = (time.perf_counter() - start) * 1000.0
            rows.append({
                "source": name,
                "strategy": strategy,
                "codecs": format_codecs(cfg.allowed_codecs),
                "mode": cfg.mode,
                "k": plan.partition.segment_count,
                "overall_rate": f"{plan.report.overall_rate:.6f}",
                "lower_bound": f"{plan.report.lower_bound:.6f}",
                "wallclock_ms": f"{elapsed:.1f}",
            })
    return rows


def write_csv(rows, fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
