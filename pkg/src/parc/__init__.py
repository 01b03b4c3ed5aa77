"""Partitioned multi-codec compression.

A byte string is cut into segments, each segment is coded by whichever of
RAW_FIXED, HUFFMAN or LZW is cheapest for it, and the cut points are chosen
to minimise the overall rate ``R = sum(w_i * R_i)`` (bits per symbol,
weights ``w_i = a_i / l``). The result is stored as a PARC archive.
"""

from .codecs import CodecId, best_codec, decode_segment, encode_segment, segment_rate
from .container import compress, decompress, inspect
from .entropy import alphabet_entropy_bound, empirical_entropy, entropy_profile, rate_lower_bound
from .model import Partition, RateReport, SegmentRate, Sequence
from .partition import (
    OptimizerConfig,
    PartitionPlan,
    brute_force_oracle,
    entropic_partition,
    evaluate_plan,
    make_plan,
    optimize_constrained,
    optimize_dp,
    uniform_partition,
)

__version__ = "0.1.0"
