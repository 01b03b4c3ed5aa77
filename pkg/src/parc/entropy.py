"""Zero-order entropy: alphabet-size bounds, plug-in estimates, window profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .memo import Memo
from .model import Partition, Sequence, as_sequence, size_weight


def alphabet_entropy_bound(alphabet_size: int) -> float:
    """Largest entropy any zero-order source on ``alphabet_size`` symbols can have."""
    if alphabet_size < 0:
        raise ValueError("alphabet_size must be >= 0")
    if alphabet_size <= 1:
        return 0.0
    return math.log2(alphabet_size)


def entropy_from_counts(counts) -> float:
    """Plug-in entropy in bits per symbol of a histogram.

    Evaluated as ``log2(n) - sum(c log2 c) / n`` so that dyadic histograms come
    out exact, which keeps comparisons against Huffman rates sharp.
    """
    if isinstance(counts, np.ndarray):
        cs = counts[counts > 0].tolist()
    else:
        cs = [int(c) for c in counts if c > 0]
    n = sum(cs)
    if len(cs) <= 1:
        return 0.0
    h = math.log2(n) - math.fsum(c * math.log2(c) for c in cs) / n
    # rounding must not push a near-uniform histogram past log2(m)
    return min(max(h, 0.0), math.log2(len(cs)))


def empirical_entropy(seq) -> float:
    return entropy_from_counts(as_sequence(seq).counts)


def rate_lower_bound(partition: Partition, entropies) -> float:
    """Size-weighted mean of per-segment entropies."""
    entropies = list(entropies)
    if len(entropies) != partition.segment_count:
        raise ValueError(
            f"{len(entropies)} entropies for {partition.segment_count} segments"
        )
    l = partition.total_length
    return math.fsum(
        size_weight(a, l) * h for a, h in zip(partition.segment_lengths, entropies)
    )


@dataclass(frozen=True)
class EntropyProfile:
    window_length: int
    stride: int
    values: tuple  # (offset, bits per symbol) pairs

    @property
    def offsets(self) -> list:
        return [o for o, _ in self.values]

    @property
    def entropies(self) -> list:
        return [h for _, h in self.values]


def entropy_profile(seq, window_length: int, stride: int) -> EntropyProfile:
    """Entropy of every full window starting at ``0, stride, 2*stride, ...``.

    A trailing partial window is dropped.
    """
    seq = as_sequence(seq)
    if window_length < 1:
        raise ValueError("window_length must be >= 1")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if window_length > seq.length:
        raise ValueError(
            f"window_length {window_length} exceeds sequence length {seq.length}"
        )
    return _PROFILES.get((seq.digest, seq.length, window_length, stride),
                         lambda: _profile(seq.data, window_length, stride))


_PROFILES = Memo(16)


def _profile(data: bytes, window_length: int, stride: int) -> EntropyProfile:
    arr = np.frombuffer(data, dtype=np.uint8)
    values = []
    for off in range(0, len(data) - window_length + 1, stride):
        counts = np.bincount(arr[off:off + window_length], minlength=256)
        values.append((off, entropy_from_counts(counts)))
    return EntropyProfile(window_length, stride, tuple(values))
