"""Exhaustive partition search, the reference the optimizers are tested against.

Deliberately shares nothing with the DP beyond the codecs themselves:
segment costs come from really encoding each segment, and the objective is
evaluated through the rate functions of :mod:`parc.model`.
"""

from __future__ import annotations

from ..codecs import encode_segment
from ..model import Partition, as_sequence, objective_constrained
from .plan import OptimizerConfig, PartitionPlan, build_plan

MAX_ORACLE_LENGTH = 16


def all_partitions(l: int):
    """Every partition of ``l`` symbols, as boundary lists, ``2**(l-1)`` of them."""
    for mask in range(1 << (l - 1)):
        cuts = [0] + [p for p in range(1, l) if mask >> (p - 1) & 1] + [l]
        yield cuts


def brute_force_oracle(seq, cfg: OptimizerConfig = OptimizerConfig()) -> PartitionPlan:
    seq = as_sequence(seq)
    l = seq.length
    if l < 1:
        raise ValueError("cannot optimise an empty sequence")
    if l > MAX_ORACLE_LENGTH:
        raise ValueError(f"oracle limited to {MAX_ORACLE_LENGTH} symbols, got {l}")
    if cfg.min_segment_length > l:
        raise ValueError("min_segment_length exceeds sequence length")
    target = cfg.target_bits
    if target is not None and target <= 0:
        raise ValueError("target_bits must be > 0")

    cheapest = {}

    def segment(s, e):
        if (s, e) not in cheapest:
            options = [encode_segment(seq.slice(s, e), c) for c in sorted(cfg.allowed_codecs)]
            # first minimum in id order
            cheapest[(s, e)] = min(options, key=lambda enc: enc.bits(cfg.mode))
        return cheapest[(s, e)]

    best = None
    for cuts in all_partitions(l):
        lengths = [b - a for a, b in zip(cuts, cuts[1:])]
        if min(lengths) < cfg.min_segment_length:
            continue
        if cfg.max_segments is not None and len(lengths) > cfg.max_segments:
            continue
        encs = [segment(a, b) for a, b in zip(cuts, cuts[1:])]
        if target is None:
            objective = sum(enc.bits(cfg.mode) for enc in encs)
        else:
            rates = [enc.bits(cfg.mode) / a for enc, a in zip(encs, lengths)]
            objective = objective_constrained(lengths, rates, l, target)
        key = (objective, len(lengths), cuts[::-1])
        if best is None or key < best[0]:
            best = (key, cuts, encs)

    _, cuts, encs = best
    return build_plan(seq, Partition.from_boundaries(cuts), [e.codec for e in encs],
                      cfg.mode, target)
