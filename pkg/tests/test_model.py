import math
import random

import pytest
from hypothesis import given, strategies as st

from parc.model import (
    Partition,
    Sequence,
    objective_constrained,
    objective_square,
    overall_rate,
    size_weight,
    total_bits,
)


@pytest.mark.parametrize("a, l, expected", [(4, 8, 0.5), (8, 8, 1.0), (3, 10, 0.3)])
def test_size_weight(a, l, expected):
    assert size_weight(a, l) == expected


@pytest.mark.parametrize("a, l", [(0, 8), (9, 8), (-1, 3)])
def test_size_weight_rejects(a, l):
    with pytest.raises(ValueError):
        size_weight(a, l)


def test_total_bits_examples():
    assert total_bits([4, 4], [1.0, 2.0]) == 12.0
    assert total_bits([8], [1.5]) == 12.0
    # 2*3 + 3*1 + 5*2
    assert total_bits([2, 3, 5], [3.0, 1.0, 2.0]) == 19.0


def test_total_bits_rejects_mismatch():
    with pytest.raises(ValueError):
        total_bits([1, 2], [1.0])


def test_overall_rate_examples():
    assert overall_rate([4, 4], [1.0, 2.0], 8) == 1.5
    for l in (1, 7, 100):
        assert overall_rate([l], [2.75], l) == 2.75
    assert math.isclose(overall_rate([2, 3, 5], [3.0, 1.0, 2.0], 10), 19.0 / 10, rel_tol=1e-12)


def test_overall_rate_rejects_bad_cover():
    with pytest.raises(ValueError):
        overall_rate([4, 3], [1.0, 1.0], 8)
    with pytest.raises(ValueError):
        overall_rate([], [], 0)


def test_objective_square_examples():
    assert objective_square([4, 4], [1.0, 2.0], 8) == 2.25
    assert objective_square([5], [0.0], 5) == 0.0
    assert math.isclose(objective_square([2, 3, 5], [3.0, 1.0, 2.0], 10), 3.61, rel_tol=1e-12)


def test_objective_constrained_examples():
    # vanishing constraint term, weight 1
    assert objective_constrained([10], [1.25], 10, 12.5) == 1.25 ** 2
    # (0.5)^2 + (8-4)^2 + (1.0)^2 + (8-8)^2
    assert objective_constrained([4, 4], [1.0, 2.0], 8, 8) == 17.25
    assert objective_constrained([4, 4], [2.0, 2.0], 8, 8) == 2.0
    with pytest.raises(ValueError):
        objective_constrained([4], [1.0], 4, -1.0)


def _random_partition(r, l):
    cuts = sorted(r.sample(range(1, l), r.randint(0, min(l - 1, 20)))) if l > 1 else []
    return Partition.from_boundaries([0] + cuts + [l])


partitions = st.integers(1, 500).flatmap(
    lambda l: st.sets(st.integers(1, l - 1), max_size=30).map(
        lambda cuts: Partition.from_boundaries([0] + sorted(cuts) + [l])
    ) if l > 1 else st.just(Partition((1,)))
)


@given(partitions, st.randoms(use_true_random=False))
def test_rate_times_length_is_total_bits(p, r):
    rates = [r.uniform(0, 8) for _ in range(p.segment_count)]
    l = p.total_length
    T = total_bits(p.segment_lengths, rates)
    R = overall_rate(p.segment_lengths, rates, l)
    assert math.isclose(R * l, T, rel_tol=1e-12, abs_tol=1e-300)


@given(partitions)
def test_weights_sum_to_one(p):
    assert math.isclose(sum(p.weights()), 1.0, rel_tol=1e-12)


@given(partitions, st.randoms(use_true_random=False))
def test_objective_square_orders_like_rate(p, r):
    l = p.total_length
    ra = [r.uniform(0, 8) for _ in range(p.segment_count)]
    rb = [r.uniform(0, 8) for _ in range(p.segment_count)]
    Ra, Rb = overall_rate(p.segment_lengths, ra, l), overall_rate(p.segment_lengths, rb, l)
    Ea, Eb = objective_square(p.segment_lengths, ra, l), objective_square(p.segment_lengths, rb, l)
    # squaring may underflow to equality, but never reverses the order
    assert not (Ra < Rb and Ea > Eb)
    if Ea < Eb:
        assert Ra < Rb


@given(partitions, st.randoms(use_true_random=False))
def test_constrained_objective_reduces_when_every_segment_meets_target(p, r):
    # one rate, and segments all the same length, so a_i * R_i == C for all i
    a = p.segment_lengths[0]
    q = Partition((a,) * p.segment_count)
    rate = r.uniform(0, 8)
    rates = [rate] * q.segment_count
    C = a * rate
    l = q.total_length
    expected = math.fsum(((x / l) * rate) ** 2 for x in q.segment_lengths)
    assert objective_constrained(q.segment_lengths, rates, l, C) == expected


def test_sequence_invariants():
    s = Sequence(b"abracadabra")
    assert s.length == 11
    assert s.alphabet == frozenset(b"abrcd")
    assert s.alphabet_size == 5
    e = Sequence(b"")
    assert e.length == 0 and e.alphabet_size == 0


def test_partition_invariants():
    p = Partition.from_boundaries([0, 3, 4, 10])
    assert p.segment_lengths == (3, 1, 6)
    assert p.total_length == 10 and p.segment_count == 3
    assert p.offsets == [0, 3, 4]
    with pytest.raises(ValueError):
        Partition((3, 0))
