from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..codecs import ALL_CODECS, MODES, CodecId, encode_segment, segment_cost
from ..entropy import entropy_from_counts, rate_lower_bound
from ..memo import Memo
from ..model import (
    Partition,
    RateReport,
    SegmentRate,
    as_sequence,
    objective_constrained,
    objective_square,
    overall_rate,
)

CANDIDATE_MODES = ("auto", "all", "profile")


@dataclass(frozen=True)
class OptimizerConfig:
    """Search space and objective for the partition optimizers.

    ``boundary_candidates`` selects where segments may start: ``"all"``
    positions (exact), entropy-``"profile"``-guided positions, or ``"auto"``,
    which is exact for short inputs and profile-guided beyond
    ``AUTO_EXACT_LIMIT`` symbols. ``candidate_window`` is the profile grid
    spacing; None derives it from the input length.
    """

    allowed_codecs: frozenset = ALL_CODECS
    mode: str = "accounted"
    min_segment_length: int = 1
    max_segments: Optional[int] = None
    boundary_candidates: str = "auto"
    target_bits: Optional[float] = None
    candidate_window: Optional[int] = None
    low_threshold: float = 2.0
    high_threshold: float = 6.0

    def __post_init__(self):
        object.__setattr__(
            self, "allowed_codecs", frozenset(CodecId(c) for c in self.allowed_codecs)
        )
        if not self.allowed_codecs:
            raise ValueError("allowed_codecs is empty")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.min_segment_length < 1:
            raise ValueError("min_segment_length must be >= 1")
        if self.max_segments is not None and self.max_segments < 1:
            raise ValueError("max_segments must be >= 1")
        if self.boundary_candidates not in CANDIDATE_MODES:
            raise ValueError(f"boundary_candidates must be one of {CANDIDATE_MODES}")
        if self.candidate_window is not None and self.candidate_window < 1:
            raise ValueError("candidate_window must be >= 1")
        if not 0 <= self.low_threshold <= self.high_threshold:
            raise ValueError("thresholds must satisfy 0 <= low <= high")


@dataclass(frozen=True)
class PartitionPlan:
    partition: Partition
    codec_choices: tuple
    mode: str
    report: RateReport
    encoded: tuple = field(default=(), repr=False, compare=False)

    @property
    def total_bits(self) -> int:
        return self.report.total_bits

    @property
    def overall_rate(self) -> float:
        return self.report.overall_rate


class _Split:
    """Segments of one (sequence, partition) pair and what is known about them.

    Plans over the same partition with other codec sets or modes reuse the
    slices, entropies, costs and encodings.
    """

    def __init__(self, seq, partition: Partition):
        self.segments = [seq.slice(s, e) for s, e in partition.spans()]
        self._entropies = None
        self._costs = {}
        self._encoded = {}

    @property
    def entropies(self) -> list:
        if self._entropies is None:
            self._entropies = [entropy_from_counts(g.counts) for g in self.segments]
        return self._entropies

    def costs(self, codec) -> list:
        """``(used codec, ideal bits, accounted bits)`` per segment."""
        if codec not in self._costs:
            rows = []
            for g in self.segments:
                used, ideal = segment_cost(g, codec, "ideal")
                rows.append((used, ideal, segment_cost(g, codec, "accounted")[1]))
            self._costs[codec] = rows
        return self._costs[codec]

    def encoded(self, t: int, codec):
        key = (t, codec)
        enc = self._encoded.get(key)
        if enc is None:
            enc = self._encoded[key] = encode_segment(self.segments[t], codec)
        return enc


_SPLITS = Memo(64)


def _split(seq, partition: Partition) -> _Split:
    if partition.total_length != seq.length:
        raise ValueError(
            f"partition covers {partition.total_length} symbols, sequence has {seq.length}"
        )
    return _SPLITS.get((seq.digest, partition.segment_lengths), lambda: _Split(seq, partition))


def _encode_all(seq, partition: Partition, codec_choices):
    if len(codec_choices) != partition.segment_count:
        raise ValueError(
            f"{len(codec_choices)} codec choices for {partition.segment_count} segments"
        )
    split = _split(seq, partition)
    return tuple(split.encoded(t, CodecId(c)) for t, c in enumerate(codec_choices))


def _report(seq, partition: Partition, encoded, mode: str, target_bits=None) -> RateReport:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if target_bits is not None and target_bits < 0:
        raise ValueError("target_bits must be >= 0")
    per_segment = []
    entropies = _split(seq, partition).entropies if encoded else []
    for a, enc, h in zip(partition.segment_lengths, encoded, entropies):
        per_segment.append(SegmentRate(
            length=a,
            codec=enc.codec,
            ideal_rate=enc.ideal_bits / a,
            accounted_rate=enc.accounted_bits / a,
            empirical_entropy=h,
            payload_bits=enc.ideal_bits,
            accounted_bits=enc.accounted_bits,
        ))
    l = seq.length
    bits = sum(enc.bits(mode) for enc in encoded)
    if l == 0:
        return RateReport(0.0, 0, 0, 0.0, 0.0,
                          0.0 if target_bits is not None else None, target_bits, ())
    lengths = partition.segment_lengths
    rates = [r.rate(mode) for r in per_segment]
    return RateReport(
        overall_rate=overall_rate(lengths, rates, l),
        total_bits=bits,
        total_length=l,
        lower_bound=rate_lower_bound(partition, [r.empirical_entropy for r in per_segment]),
        objective_square=objective_square(lengths, rates, l),
        objective_constrained=(
            None if target_bits is None
            else objective_constrained(lengths, rates, l, target_bits)
        ),
        target_bits=target_bits,
        per_segment=tuple(per_segment),
    )


def evaluate_plan(seq, partition: Partition, codec_choices, mode: str = "accounted",
                  target_bits: Optional[float] = None) -> RateReport:
    """Encode every segment with its codec and report the resulting rates."""
    seq = as_sequence(seq)
    encoded = _encode_all(seq, partition, codec_choices)
    return _report(seq, partition, encoded, mode, target_bits)


def _plan_from_encoded(seq, partition, encoded, mode, target_bits) -> PartitionPlan:
    report = _report(seq, partition, encoded, mode, target_bits)
    # codecs as actually written (HUFFMAN may have fallen back to RAW_FIXED)
    used = tuple(CodecId(enc.codec) for enc in encoded)
    return PartitionPlan(partition, used, mode, report, tuple(encoded))


def build_plan(seq, partition: Partition, codec_choices, mode: str,
               target_bits: Optional[float] = None) -> PartitionPlan:
    seq = as_sequence(seq)
    encoded = _encode_all(seq, partition, codec_choices)
    return _plan_from_encoded(seq, partition, encoded, mode, target_bits)


def assign_codecs(seq, partition: Partition, cfg: OptimizerConfig) -> PartitionPlan:
    """Give every segment of a fixed partition its cheapest allowed codec.

    Same choice as :func:`best_codec` (ties to the lower id); candidates are
    priced without encoding and only the winner is encoded.
    """
    seq = as_sequence(seq)
    split = _split(seq, partition)
    column = 1 if cfg.mode == "ideal" else 2
    encoded = []
    tables = [split.costs(c) for c in sorted(cfg.allowed_codecs)]
    for t, options in enumerate(zip(*tables)):
        # first minimum, i.e. the lowest codec id among equal costs
        best = min(options, key=lambda row: row[column])
        encoded.append(split.encoded(t, best[0]))
    return _plan_from_encoded(seq, partition, encoded, cfg.mode, cfg.target_bits)
