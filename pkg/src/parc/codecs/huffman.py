"""Canonical Huffman coding over byte symbols.

Model layouts (first byte is the form tag):

    0x00 DENSE   128 bytes of 4-bit code lengths, symbol 2i in the high nibble
                 of byte i and 2i+1 in the low nibble; 0 means absent
    0x01 SPARSE  count:u8, then ``count`` pairs (symbol:u8, length:u8) in
                 increasing symbol order

SPARSE is written for alphabets of at most 32 symbols, DENSE otherwise. A
one-symbol alphabet is SPARSE with a single length-0 entry and no payload.

Codewords are assigned canonically from the length table: symbols sorted by
(length, value) take consecutive codes, shifting left whenever the length
grows.
"""

import heapq
from functools import lru_cache

from ..bitio import BitReader
from ..errors import BadModel, PayloadOverrun, PayloadUnderrun

DENSE, SPARSE = 0, 1
SPARSE_MAX = 32
MAX_CODE_LENGTH = 15


def code_lengths(counts) -> dict:
    """Huffman code length of every symbol with a nonzero count.

    ``counts`` is indexable by symbol (a 256-long array or a dict). Ties in
    the merge order go to the smaller node id; leaves use their symbol value
    as id and internal nodes are numbered from 256 in creation order, so the
    result does not depend on how the counts were gathered.
    """
    items = counts.items() if hasattr(counts, "items") else enumerate(counts)
    heap = [(int(c), int(s)) for s, c in items if c > 0]
    if not heap:
        return {}
    if len(heap) == 1:
        return {heap[0][1]: 0}
    heap.sort()
    parent = {}
    next_id = 256
    while len(heap) > 1:
        w1, a = heapq.heappop(heap)
        w2, b = heapq.heappop(heap)
        parent[a] = parent[b] = next_id
        heapq.heappush(heap, (w1 + w2, next_id))
        next_id += 1
    root = next_id - 1
    depth = {root: 0}
    for node in range(root - 1, 255, -1):
        depth[node] = depth[parent[node]] + 1
    return {s: depth[parent[s]] + 1 for s in parent if s < 256}


def canonical_codes(lengths: dict) -> dict:
    """Map symbol -> (code, length) for a complete length table."""
    codes = {}
    code = 0
    prev = 0
    for s, n in sorted(lengths.items(), key=lambda kv: (kv[1], kv[0])):
        code <<= n - prev
        codes[s] = (code, n)
        code += 1
        prev = n
    return codes


def model_size(m: int) -> int:
    return 2 + 2 * m if m <= SPARSE_MAX else 129


def build_model(lengths: dict) -> bytes:
    if len(lengths) <= SPARSE_MAX:
        out = bytearray([SPARSE, len(lengths)])
        for s in sorted(lengths):
            out += bytes([s, lengths[s]])
        return bytes(out)
    table = bytearray(128)
    for s, n in lengths.items():
        table[s >> 1] |= n << 4 if s % 2 == 0 else n
    return bytes([DENSE]) + bytes(table)


def parse_model(model: bytes) -> dict:
    """Length table from a model; rejects anything that is not a complete code."""
    if not model:
        raise BadModel("empty Huffman model")
    tag = model[0]
    if tag == SPARSE:
        if len(model) < 2 or len(model) != 2 + 2 * model[1]:
            raise BadModel("Huffman sparse model has wrong length")
        pairs = [(model[i], model[i + 1]) for i in range(2, len(model), 2)]
        if any(a[0] >= b[0] for a, b in zip(pairs, pairs[1:])):
            raise BadModel("Huffman sparse symbols not strictly increasing")
        lengths = dict(pairs)
    elif tag == DENSE:
        if len(model) != 129:
            raise BadModel("Huffman dense model has wrong length")
        lengths = {}
        for i, byte in enumerate(model[1:]):
            if byte >> 4:
                lengths[2 * i] = byte >> 4
            if byte & 15:
                lengths[2 * i + 1] = byte & 15
    else:
        raise BadModel(f"unknown Huffman model form {tag:#x}")

    if not lengths:
        raise BadModel("Huffman model lists no symbols")
    if len(lengths) == 1:
        if next(iter(lengths.values())) != 0:
            raise BadModel("single-symbol Huffman model must have length 0")
        return lengths
    if any(not 1 <= n <= MAX_CODE_LENGTH for n in lengths.values()):
        raise BadModel("Huffman code length outside [1, 15]")
    kraft = sum(1 << (MAX_CODE_LENGTH - n) for n in lengths.values())
    if kraft != 1 << MAX_CODE_LENGTH:
        raise BadModel(f"Huffman lengths violate Kraft equality ({kraft}/32768)")
    return lengths


def cost(counts):
    """``(payload_bits, model_bytes)``, or None if the tree is deeper than 15.

    ``counts`` is a dict or a 256-long array as for :func:`code_lengths`.
    """
    values = counts.values() if hasattr(counts, "values") else counts
    return cost_sorted(sorted(int(c) for c in values if c > 0))


def cost_sorted(weights: list):
    """:func:`cost` from the nonzero counts in ascending order.

    Builds the same tree as :func:`code_lengths` but keeps only the total
    (the sum of all merged weights) and the height. Which of several equal
    leaves is taken first changes labels, not the tree's shape, so symbol
    values are not needed. Merged nodes come out in nondecreasing weight, so
    two queues replace the heap: a leaf beats an internal node of equal
    weight, as its id is smaller.
    """
    m = len(weights)
    if m <= 2:
        return (0 if m < 2 else weights[0] + weights[1]), model_size(m)
    inf = float("inf")
    leaf = list(weights)
    leaf.append(inf)
    # merged node k is written at index k; unwritten slots read as +inf
    node_w = [inf] * m
    node_h = [0] * m
    li = ni = 0
    payload = 0
    for k in range(m - 1):
        if leaf[li] <= node_w[ni]:
            w1, h1 = leaf[li], 0
            li += 1
        else:
            w1, h1 = node_w[ni], node_h[ni]
            ni += 1
        if leaf[li] <= node_w[ni]:
            w2, h2 = leaf[li], 0
            li += 1
        else:
            w2, h2 = node_w[ni], node_h[ni]
            ni += 1
        node_w[k] = w1 + w2
        node_h[k] = (h1 if h1 > h2 else h2) + 1
        payload += w1 + w2
    if node_h[m - 2] > MAX_CODE_LENGTH:
        return None
    return payload, model_size(m)


def encode(data: bytes, counts):
    """``(model, bit string)``, or None when the code would exceed 15 bits."""
    lengths = code_lengths(counts)
    if max(lengths.values()) > MAX_CODE_LENGTH:
        return None
    codes = canonical_codes(lengths)
    words = [""] * 256
    for s, (code, n) in codes.items():
        if n:
            words[s] = format(code, f"0{n}b")
    return build_model(lengths), "".join([words[b] for b in data])


@lru_cache(maxsize=None)
def _all_strings(d: int) -> tuple:
    return tuple(format(i, f"0{d}b") for i in range(1 << d)) if d else ("",)


def decode(model: bytes, reader: BitReader, n: int) -> bytes:
    lengths = parse_model(model)
    if len(lengths) == 1:
        if reader.bit_length:
            raise PayloadOverrun("single-symbol Huffman segment carries payload bits")
        return bytes([next(iter(lengths))]) * n

    maxlen = max(lengths.values())
    codes = canonical_codes(lengths)
    limit = reader.bit_length
    bits = reader.bits[:limit] + "0" * maxlen
    out = bytearray(n)
    pos = 0
    if (1 << maxlen) <= 2 * n:
        # keyed by the next maxlen bits as a string: saves an int() per symbol
        table = {}
        for s, (code, ln) in codes.items():
            word = format(code, f"0{ln}b")
            entry = (s, ln)
            for tail in _all_strings(maxlen - ln):
                table[word + tail] = entry
        for k in range(n):
            out[k], ln = table[bits[pos:pos + maxlen]]
            pos += ln
            if pos > limit:
                raise PayloadUnderrun(f"Huffman payload ran out after {k} of {n} symbols")
    else:
        table = [None] * (1 << maxlen)
        for s, (code, ln) in codes.items():
            base = code << (maxlen - ln)
            entry = (s, ln)
            for j in range(1 << (maxlen - ln)):
                table[base + j] = entry
        for k in range(n):
            out[k], ln = table[int(bits[pos:pos + maxlen], 2)]
            pos += ln
            if pos > limit:
                raise PayloadUnderrun(f"Huffman payload ran out after {k} of {n} symbols")
    if pos < limit:
        raise PayloadOverrun(f"Huffman payload has {limit - pos} unused bits")
    reader.pos = pos
    return bytes(out)
