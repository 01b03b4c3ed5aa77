"""Partitions that do not search: fixed blocks and entropy-driven segmentation."""

from __future__ import annotations

from ..entropy import entropy_profile
from ..model import Partition, as_sequence

LOW, MID, HIGH = "low", "mid", "high"

# low-entropy runs are cut into pieces of at most this many windows
LOW_CAP_WINDOWS = 64


def uniform_partition(l: int, block: int) -> Partition:
    """Consecutive blocks of ``block`` symbols, the last one holding the remainder.

    With ``block = m - 1`` for an alphabet of ``m`` symbols, no block can
    contain all ``m`` symbols, so each block's alphabet bound is at most
    ``log2(m - 1)``.
    """
    if block < 1:
        raise ValueError("block must be >= 1")
    if l < 1:
        raise ValueError("length must be >= 1")
    full, rest = divmod(l, block)
    return Partition((block,) * full + ((rest,) if rest else ()))


def classify(h: float, low_threshold: float, high_threshold: float) -> str:
    if h <= low_threshold:
        return LOW
    if h >= high_threshold:
        return HIGH
    return MID


def entropic_partition(seq, window: int, low_threshold: float, high_threshold: float,
                       low_cap: int = LOW_CAP_WINDOWS) -> Partition:
    """Short segments where the local entropy is high, long ones where it is low.

    Non-overlapping windows are classified low (entropy <= ``low_threshold``),
    high (>= ``high_threshold``) or mid. Runs of equally classified windows
    merge into one segment; high runs are then cut back to single windows
    and low runs capped at ``low_cap`` windows. Symbols past the last full
    window join the final segment.
    """
    seq = as_sequence(seq)
    if not 0 <= low_threshold <= high_threshold:
        raise ValueError("thresholds must satisfy 0 <= low <= high")
    if not 1 <= window <= seq.length:
        raise ValueError(f"window must lie in [1, {seq.length}]")
    if low_cap < 1:
        raise ValueError("low_cap must be >= 1")

    profile = entropy_profile(seq, window, window)
    classes = [classify(h, low_threshold, high_threshold) for h in profile.entropies]

    runs = []  # [class, window count]
    for c in classes:
        if runs and runs[-1][0] == c:
            runs[-1][1] += 1
        else:
            runs.append([c, 1])

    lengths = []
    for c, n in runs:
        if c == HIGH:
            lengths.extend([window] * n)
        elif c == LOW:
            full, rest = divmod(n, low_cap)
            lengths.extend([low_cap * window] * full)
            if rest:
                lengths.append(rest * window)
        else:
            lengths.append(n * window)

    tail = seq.length - len(classes) * window
    lengths[-1] += tail
    return Partition(tuple(lengths))
