"""Domain values and the rate arithmetic shared by every other module.

A sequence of ``l`` symbols is cut into ``k`` segments of lengths ``a_i``.
When segment ``i`` is coded at ``R_i`` bits per symbol the whole sequence
costs ``T = sum(a_i * R_i)`` bits, i.e. ``R = T / l = sum(w_i * R_i)`` bits
per symbol with size weights ``w_i = a_i / l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence as Seq

import numpy as np

from . import memo


class _lazy:
    """Compute-once attribute; unlike functools.cached_property it takes no lock."""

    def __init__(self, fn):
        self.fn = fn
        self.name = fn.__name__
        self.__doc__ = fn.__doc__

    def __get__(self, obj, owner=None):
        if obj is None:
            return self
        value = obj.__dict__[self.name] = self.fn(obj)
        return value


@dataclass(frozen=True)
class Sequence:
    """An immutable byte string together with its symbol statistics."""

    data: bytes

    def __post_init__(self):
        if not isinstance(self.data, bytes):
            object.__setattr__(self, "data", bytes(self.data))

    def __len__(self):
        return len(self.data)

    @property
    def length(self) -> int:
        return len(self.data)

    @_lazy
    def counts(self) -> np.ndarray:
        """Occurrences of every byte value, shape ``(256,)``."""
        return np.bincount(np.frombuffer(self.data, dtype=np.uint8), minlength=256)

    @_lazy
    def alphabet(self) -> frozenset:
        return frozenset(int(s) for s in np.flatnonzero(self.counts))

    @_lazy
    def digest(self) -> bytes:
        """128-bit content digest, the key of the memo tables."""
        return memo.digest(self.data)

    @property
    def alphabet_size(self) -> int:
        return len(self.alphabet)

    def slice(self, start: int, stop: int) -> "Sequence":
        return Sequence(self.data[start:stop])


def as_sequence(obj) -> Sequence:
    if isinstance(obj, Sequence):
        return obj
    return Sequence(bytes(obj))


@dataclass(frozen=True)
class Partition:
    """Ordered segment lengths covering ``total_length`` symbols.

    The empty partition (no segments, total 0) is allowed so that empty
    inputs have a plan; every other partition has ``1 <= k <= l``.
    """

    segment_lengths: tuple

    def __post_init__(self):
        lengths = tuple(int(a) for a in self.segment_lengths)
        if any(a < 1 for a in lengths):
            raise ValueError(f"segment lengths must be >= 1: {lengths}")
        object.__setattr__(self, "segment_lengths", lengths)

    @classmethod
    def from_boundaries(cls, boundaries: Iterable[int]) -> "Partition":
        """Build from cut offsets ``0 = b_0 < b_1 < ... < b_k = l``."""
        b = list(boundaries)
        return cls(tuple(y - x for x, y in zip(b, b[1:])))

    @property
    def total_length(self) -> int:
        return sum(self.segment_lengths)

    @property
    def segment_count(self) -> int:
        return len(self.segment_lengths)

    @property
    def offsets(self) -> list:
        """Start offset of each segment."""
        out, pos = [], 0
        for a in self.segment_lengths:
            out.append(pos)
            pos += a
        return out

    @property
    def boundaries(self) -> list:
        return self.offsets + [self.total_length]

    def weights(self) -> list:
        l = self.total_length
        return [size_weight(a, l) for a in self.segment_lengths]

    def spans(self):
        for start, a in zip(self.offsets, self.segment_lengths):
            yield start, start + a


@dataclass(frozen=True)
class SegmentRate:
    length: int
    codec: int
    ideal_rate: float
    accounted_rate: float
    empirical_entropy: float
    # exact bit counts behind the two rates
    payload_bits: int = 0
    accounted_bits: int = 0

    def rate(self, mode: str) -> float:
        return self.ideal_rate if mode == "ideal" else self.accounted_rate

    def bits(self, mode: str) -> int:
        return self.payload_bits if mode == "ideal" else self.accounted_bits


@dataclass(frozen=True)
class RateReport:
    overall_rate: float
    total_bits: int
    total_length: int
    lower_bound: float
    objective_square: float
    objective_constrained: Optional[float] = None
    target_bits: Optional[float] = None
    per_segment: tuple = field(default_factory=tuple)

    @property
    def segment_count(self) -> int:
        return len(self.per_segment)


def size_weight(a: int, l: int) -> float:
    """Fraction of the sequence covered by a segment of length ``a``."""
    if not 1 <= a <= l:
        raise ValueError(f"segment length {a} outside [1, {l}]")
    return a / l


def _check_aligned(segment_lengths: Seq, rates: Seq) -> None:
    if len(segment_lengths) != len(rates):
        raise ValueError(
            f"{len(segment_lengths)} segment lengths but {len(rates)} rates"
        )
    if any(a < 1 for a in segment_lengths):
        raise ValueError("segment lengths must be >= 1")
    if any(r < 0 for r in rates):
        raise ValueError("rates must be >= 0")


def total_bits(segment_lengths: Seq, rates: Seq) -> float:
    _check_aligned(segment_lengths, rates)
    return math.fsum(a * r for a, r in zip(segment_lengths, rates))


def _check_cover(segment_lengths: Seq, rates: Seq, l: int) -> None:
    _check_aligned(segment_lengths, rates)
    if l < 1:
        raise ValueError("sequence length must be >= 1")
    if sum(segment_lengths) != l:
        raise ValueError(f"segment lengths sum to {sum(segment_lengths)}, not {l}")


def overall_rate(segment_lengths: Seq, rates: Seq, l: int) -> float:
    _check_cover(segment_lengths, rates, l)
    return math.fsum((a / l) * r for a, r in zip(segment_lengths, rates))


def objective_square(segment_lengths: Seq, rates: Seq, l: int) -> float:
    return overall_rate(segment_lengths, rates, l) ** 2


def objective_constrained(segment_lengths: Seq, rates: Seq, l: int, target_bits: float) -> float:
    """Per-segment squared weighted rate plus squared miss of the bit target.

    A target of ``C`` bits asks every segment to cost about ``C`` bits.
    """
    _check_cover(segment_lengths, rates, l)
    if target_bits < 0:
        raise ValueError("target_bits must be >= 0")
    return math.fsum(
        ((a / l) * r) ** 2 + (target_bits - a * r) ** 2
        for a, r in zip(segment_lengths, rates)
    )
