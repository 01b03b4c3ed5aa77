"""Partition strategies and the plans they produce.

``make_plan`` is the single entry point used by the archive writer and the
CLI; the individual strategies are importable for direct use.
"""

from __future__ import annotations

from dataclasses import replace

from ..model import Partition, as_sequence
from .heuristics import entropic_partition, uniform_partition
from .optimize import (
    AUTO_EXACT_LIMIT,
    candidate_boundaries,
    optimize_constrained,
    optimize_dp,
    segment_cost_table,
    solve_segmentation,
)
from .oracle import MAX_ORACLE_LENGTH, all_partitions, brute_force_oracle
from .plan import (
    OptimizerConfig,
    PartitionPlan,
    assign_codecs,
    build_plan,
    evaluate_plan,
)

STRATEGIES = ("single", "uniform", "entropic", "dp", "constrained")

DEFAULT_BLOCK = 4096
DEFAULT_WINDOW = 4096
DEFAULT_LOW_THRESHOLD = 2.0
DEFAULT_HIGH_THRESHOLD = 6.0


def make_plan(data, strategy: str = "dp", cfg: OptimizerConfig = OptimizerConfig(), *,
              block: int = DEFAULT_BLOCK, window: int = DEFAULT_WINDOW,
              low_threshold: float = DEFAULT_LOW_THRESHOLD,
              high_threshold: float = DEFAULT_HIGH_THRESHOLD) -> PartitionPlan:
    """Plan ``data`` with one of :data:`STRATEGIES`.

    Unlike the underlying operations this accepts any input size: empty
    input gets the empty plan, and ``window`` and ``cfg.min_segment_length``
    are clamped to the input length. A ``cfg.target_bits`` given to a
    strategy other than ``constrained`` only adds the bit-target objective
    to the report.
    """
    seq = as_sequence(data)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if strategy == "constrained" and (cfg.target_bits is None or cfg.target_bits <= 0):
        raise ValueError("the constrained strategy needs target_bits > 0")
    l = seq.length
    if l == 0:
        return build_plan(seq, Partition(()), (), cfg.mode, cfg.target_bits)

    if strategy == "single":
        return assign_codecs(seq, Partition((l,)), cfg)
    if strategy == "uniform":
        return assign_codecs(seq, uniform_partition(l, block), cfg)
    if strategy == "entropic":
        part = entropic_partition(seq, min(window, l), low_threshold, high_threshold)
        return assign_codecs(seq, part, cfg)

    if cfg.min_segment_length > l:
        cfg = replace(cfg, min_segment_length=l)
    if strategy == "dp":
        plan = optimize_dp(seq, replace(cfg, target_bits=None))
        if cfg.target_bits is None:
            return plan
        return build_plan(seq, plan.partition, plan.codec_choices, cfg.mode, cfg.target_bits)
    return optimize_constrained(seq, cfg)


__all__ = [
    "AUTO_EXACT_LIMIT",
    "MAX_ORACLE_LENGTH",
    "OptimizerConfig",
    "PartitionPlan",
    "STRATEGIES",
    "all_partitions",
    "assign_codecs",
    "brute_force_oracle",
    "build_plan",
    "candidate_boundaries",
    "entropic_partition",
    "evaluate_plan",
    "make_plan",
    "optimize_constrained",
    "optimize_dp",
    "segment_cost_table",
    "solve_segmentation",
    "uniform_partition",
]
