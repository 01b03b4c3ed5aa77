"""Optimal partitioning by dynamic programming over split points.

Every segment is coded by its cheapest allowed codec, so a partition's cost
is a sum of per-segment costs and the optimum over all partitions follows
from ``best(j) = min over i < j of best(i) + cost(i, j)``. Two objectives
are supported: total bits (equivalently the overall rate and its square)
and the bit-target objective, whose per-segment term is
``(bits / l)**2 + (C - bits)**2``.

Ties are broken toward fewer segments, then toward the earliest last split
point, applied recursively; the result is the same plan on every run.
"""

from __future__ import annotations

import math

import numpy as np

from ..codecs import CodecId, counted_cost, lzw
from ..entropy import entropy_profile
from ..layout import SEGMENT_HEADER_BYTES
from ..memo import Memo
from ..model import Partition, as_sequence
from .heuristics import classify
from .plan import OptimizerConfig, PartitionPlan, build_plan

# "auto" candidates are exact up to this many symbols
AUTO_EXACT_LIMIT = 128
# profile-guided grids aim for about this many cells (plus change points)
PROFILE_GRID = 32

def candidate_boundaries(seq, cfg: OptimizerConfig) -> list:
    """Offsets where a segment may begin or end, always including 0 and l."""
    seq = as_sequence(seq)
    l = seq.length
    kind = cfg.boundary_candidates
    if kind == "auto":
        kind = "all" if l <= AUTO_EXACT_LIMIT else "profile"
    if kind == "all":
        return list(range(l + 1))

    window = cfg.candidate_window or max(cfg.min_segment_length, math.ceil(l / PROFILE_GRID))
    window = min(window, l)
    cands = set(range(0, l, window))
    cands.add(l)

    stride = max(1, window // 4)
    profile = entropy_profile(seq, window, stride)
    classes = [classify(h, cfg.low_threshold, cfg.high_threshold) for h in profile.entropies]
    changes = []
    for t in range(1, len(classes)):
        if classes[t] != classes[t - 1]:
            jump = abs(profile.values[t][1] - profile.values[t - 1][1])
            changes.append((-jump, profile.values[t - 1][0] + (window + stride) // 2))
    for _, pos in sorted(changes)[:PROFILE_GRID]:
        if 0 < pos < l:
            cands.add(pos)
    return sorted(cands)


_CELL_COSTS = Memo(32)
_TABLES = Memo(32)
_COUNTED = (CodecId.RAW_FIXED, CodecId.HUFFMAN)


def _codec_costs(data: bytes, positions: tuple, codecs) -> dict:
    """``{codec: (used, payload_bits, model_bytes)}`` as ``n x n`` integer arrays.

    Cell ``[i, j]`` (``i < j``) describes ``data[positions[i]:positions[j]]``
    coded by ``codec``; ``used`` differs from it where HUFFMAN falls back to
    RAW_FIXED. Independent of mode, so plans for other codec sets or modes
    over the same bytes and candidates reuse the work.
    """
    n = len(positions)
    out = {}
    if CodecId.LZW in codecs:
        payload = np.zeros((n, n), dtype=np.int64)
        for i in range(n - 1):
            payload[i, i + 1:] = lzw.prefix_costs(data, positions[i], positions[i + 1:])
        out[CodecId.LZW] = (np.full((n, n), int(CodecId.LZW), dtype=np.int64), payload,
                            np.zeros((n, n), dtype=np.int64))
    counted = [c for c in codecs if c != CodecId.LZW]
    if not counted:
        return out
    arr = np.frombuffer(data, dtype=np.uint8)
    prefix = np.zeros((n, 256), dtype=np.int64)
    for t in range(1, n):
        prefix[t] = prefix[t - 1] + np.bincount(arr[positions[t - 1]:positions[t]], minlength=256)
    mats = {c: tuple(np.zeros((n, n), dtype=np.int64) for _ in range(3)) for c in counted}
    for i in range(n - 1):
        # histograms of positions[i]:positions[j] for every j > i, as ascending
        # lists of the nonzero counts
        diff = prefix[i + 1:] - prefix[i]
        r, col = np.nonzero(diff)
        vals = diff[r, col]
        flat = vals[np.lexsort((vals, r))].tolist()
        ends = np.cumsum(np.bincount(r, minlength=n - i - 1)).tolist()
        rows = {c: [] for c in counted}
        lo = 0
        for t, hi in enumerate(ends):
            weights = flat[lo:hi]
            lo = hi
            size = positions[i + 1 + t] - positions[i]
            for c in counted:
                rows[c].append(counted_cost(weights, size, c))
        for c in counted:
            used, payload, model = mats[c]
            cells = np.array(rows[c], dtype=np.int64).reshape(-1, 3)
            used[i, i + 1:], payload[i, i + 1:], model[i, i + 1:] = cells.T
    out.update(mats)
    return out


def _cell_costs(seq, positions: tuple, codec: CodecId):
    key = (seq.digest, positions, codec)
    costs = _CELL_COSTS.lookup(key)
    if costs is None:
        # the counted codecs are priced together, one histogram per cell
        group = [codec]
        if codec != CodecId.LZW:
            group = [c for c in _COUNTED if c == codec or (seq.digest, positions, c) not in _CELL_COSTS]
        for c, mats in _codec_costs(seq.data, positions, group).items():
            _CELL_COSTS.put((seq.digest, positions, c), mats)
        costs = _CELL_COSTS.lookup(key)
    return costs


def _cost_arrays(seq, positions: tuple, allowed, mode: str, min_length: int):
    """``(bits, codec, valid)`` arrays over candidate pairs ``[i, j]``."""
    allowed = frozenset(CodecId(c) for c in allowed)
    key = (seq.digest, positions, allowed, mode, min_length)
    hit = _TABLES.lookup(key)
    if hit is not None:
        return hit
    header_bits = 8 * SEGMENT_HEADER_BYTES if mode == "accounted" else 0
    used, bits = [], []
    for c in sorted(allowed):
        u, payload, model = _cell_costs(seq, positions, c)
        used.append(u)
        bits.append(payload + 8 * model + header_bits if mode == "accounted" else payload)
    bits, used = np.stack(bits), np.stack(used)
    # first minimum, i.e. the lowest codec id among equal costs
    pick = np.argmin(bits, axis=0)[None]
    bits = np.take_along_axis(bits, pick, 0)[0]
    used = np.take_along_axis(used, pick, 0)[0]
    pos = np.asarray(positions, dtype=np.int64)
    valid = pos[None, :] - pos[:, None] >= max(1, min_length)
    out = (bits, used, valid)
    _TABLES.put(key, out)
    return out


def segment_cost_table(seq, positions, allowed, mode: str, min_length: int = 1):
    """``table[i][j] = (bits, codec)`` for the segment ``positions[i]:positions[j]``.

    ``bits`` is the cheapest cost among ``allowed`` in ``mode`` (payload only
    when ideal; plus model and segment header when accounted), ``codec`` the
    codec realising it. Entries for segments shorter than ``min_length`` are
    None. RAW_FIXED and HUFFMAN costs come from prefix histograms, LZW from
    one incremental pass per start offset.
    """
    seq = as_sequence(seq)
    positions = tuple(positions)
    bits, used, valid = _cost_arrays(seq, positions, allowed, mode, min_length)
    n = len(positions)
    table = [[None] * n for _ in range(n)]
    for i, j in zip(*np.nonzero(valid)):
        table[i][j] = (int(bits[i, j]), CodecId(int(used[i, j])))
    return table


def solve_segmentation(cost: np.ndarray, valid: np.ndarray, max_segments=None) -> list:
    """Indices ``0 = b_0 < ... < b_k = n - 1`` minimising ``sum cost[b_t, b_t+1]``.

    Only pairs with ``valid[i, j]`` may form a segment. Keys are compared as
    (total, segment count); among equal keys the smallest last index wins.
    Raises ValueError if no admissible segmentation exists.
    """
    n = len(cost)
    last = n - 1
    # admissible predecessors of every j with their segment costs
    preds = []
    for j in range(n):
        ii = np.flatnonzero(valid[:j, j])
        preds.append((ii.tolist(), cost[ii, j].tolist()))

    if max_segments is None:
        total = [None] * n
        count = [0] * n
        back = [0] * n
        total[0] = 0
        for j in range(1, n):
            bt = bk = None
            bi = 0
            for i, c in zip(*preds[j]):
                ti = total[i]
                if ti is None:
                    continue
                t, k = ti + c, count[i] + 1
                if bt is None or t < bt or (t == bt and k < bk):
                    bt, bk, bi = t, k, i
            total[j], count[j], back[j] = bt, bk or 0, bi
        if total[last] is None:
            raise ValueError("no admissible segmentation")
        out = [last]
        while out[-1]:
            out.append(back[out[-1]])
        return out[::-1]

    kmax = min(max_segments, last)
    # layer[k][j]: best total over [0, j) using exactly k segments
    layer = [[None] * n for _ in range(kmax + 1)]
    back = [[0] * n for _ in range(kmax + 1)]
    layer[0][0] = 0
    for k in range(1, kmax + 1):
        prev, cur, bk = layer[k - 1], layer[k], back[k]
        for j in range(1, n):
            best = None
            for i, c in zip(*preds[j]):
                p = prev[i]
                if p is None:
                    continue
                v = p + c
                if best is None or v < best:
                    best = v
                    bk[j] = i
            cur[j] = best
    best_k = None
    for k in range(1, kmax + 1):
        v = layer[k][last]
        if v is not None and (best_k is None or v < layer[best_k][last]):
            best_k = k
    if best_k is None:
        raise ValueError("no admissible segmentation")
    out = [last]
    for k in range(best_k, 0, -1):
        out.append(back[k][out[-1]])
    return out[::-1]


def _optimize(seq, cfg: OptimizerConfig, target_bits=None) -> PartitionPlan:
    seq = as_sequence(seq)
    l = seq.length
    if l < 1:
        raise ValueError("cannot optimise an empty sequence")
    if cfg.min_segment_length > l:
        raise ValueError(
            f"min_segment_length {cfg.min_segment_length} exceeds sequence length {l}"
        )
    positions = tuple(candidate_boundaries(seq, cfg))
    bits, used, valid = _cost_arrays(seq, positions, cfg.allowed_codecs, cfg.mode,
                                     cfg.min_segment_length)
    if target_bits is None:
        cost = bits
    else:
        b = bits.astype(np.float64)
        cost = (b / l) ** 2 + (target_bits - b) ** 2

    idx = solve_segmentation(cost, valid, cfg.max_segments)
    partition = Partition.from_boundaries(positions[t] for t in idx)
    choices = [CodecId(int(used[a, b])) for a, b in zip(idx, idx[1:])]
    return build_plan(seq, partition, choices, cfg.mode, target_bits)


def optimize_dp(seq, cfg: OptimizerConfig = OptimizerConfig()) -> PartitionPlan:
    """Partition and codec assignment with the fewest total bits."""
    if cfg.target_bits is not None:
        raise ValueError("optimize_dp takes no target_bits; use optimize_constrained")
    return _optimize(seq, cfg)


def optimize_constrained(seq, cfg: OptimizerConfig) -> PartitionPlan:
    """Partition minimising the bit-target objective for ``cfg.target_bits``.

    Segments still get their cheapest codec; only the split points trade
    rate against closeness of each segment's cost to the target.
    """
    C = cfg.target_bits
    if C is None or C <= 0:
        raise ValueError("optimize_constrained needs target_bits > 0")
    return _optimize(seq, cfg, float(C))
