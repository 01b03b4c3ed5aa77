import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from parc import bitio
from parc.codecs import (
    ALL_CODECS,
    CodecId,
    EncodedSegment,
    best_codec,
    counted_cost,
    decode_segment,
    encode_segment,
    huffman,
    lzw,
    parse_codecs,
    raw,
    segment_cost,
    segment_rate,
)
from parc.entropy import alphabet_entropy_bound, empirical_entropy
from parc.errors import BadModel, CodeOutOfRange, CorruptSegment, PayloadOverrun, PayloadUnderrun
from parc.layout import SEGMENT_HEADER_BYTES
from parc.model import Sequence


def optimal_prefix_cost(counts):
    """Cheapest prefix code by exhaustive search over code length vectors.

    A length vector is realisable as a prefix code iff it satisfies Kraft's
    inequality, so minimising over those is minimising over prefix codes.
    """
    symbols = list(counts)
    best = None
    for lengths in itertools.product(range(1, len(symbols) + 1), repeat=len(symbols)):
        if sum(2.0 ** -n for n in lengths) <= 1:
            cost = sum(counts[s] * n for s, n in zip(symbols, lengths))
            best = cost if best is None else min(best, cost)
    return best


def reference_lzw(data):
    """Plain textbook LZW with string keys, for cross-checking codes."""
    table = {bytes([i]): i for i in range(256)}
    w = b""
    out = []
    for c in data:
        wc = w + bytes([c])
        if wc in table:
            w = wc
        else:
            out.append(table[w])
            table[wc] = len(table)
            w = bytes([c])
    if w:
        out.append(table[w])
    return out


# -- bit packing ------------------------------------------------------------

def test_pack_bits_msb_first_zero_padded():
    assert bitio.pack_bits("") == b""
    assert bitio.pack_bits("1") == b"\x80"
    assert bitio.pack_bits("101") == b"\xa0"
    assert bitio.pack_bits("00000001" "1") == b"\x01\x80"


@given(st.text(alphabet="01", max_size=200))
def test_pack_unpack_roundtrip(bits):
    packed = bitio.pack_bits(bits)
    assert len(packed) == bitio.payload_bytes(len(bits))
    assert bitio.unpack_bits(packed)[:len(bits)] == bits


# -- encode_segment examples ------------------------------------------------

def test_huffman_single_symbol_has_no_payload():
    enc = encode_segment(b"aaaa", CodecId.HUFFMAN)
    assert enc.payload_bit_length == 0
    assert segment_rate(b"aaaa", CodecId.HUFFMAN, "ideal") == 0.0


def test_huffman_three_symbols_matches_exhaustive_prefix_search():
    counts = {ord("x"): 2, ord("y"): 1, ord("z"): 1}
    assert optimal_prefix_cost(counts) == 6
    enc = encode_segment(b"xxyz", CodecId.HUFFMAN)
    assert enc.payload_bit_length == 6
    assert segment_rate(b"xxyz", CodecId.HUFFMAN) == 1.5
    assert huffman.code_lengths(counts) == {ord("x"): 1, ord("y"): 2, ord("z"): 2}


@given(st.dictionaries(st.integers(0, 255), st.integers(1, 50), min_size=2, max_size=6))
@settings(max_examples=60)
def test_huffman_cost_is_optimal(counts):
    data = b"".join(bytes([s]) * c for s, c in counts.items())
    enc = encode_segment(data, CodecId.HUFFMAN)
    assert enc.payload_bit_length == optimal_prefix_cost(counts)


def test_raw_fixed_examples():
    enc = encode_segment(b"abab", CodecId.RAW_FIXED)
    assert enc.payload_bit_length == 4
    assert segment_rate(b"abab", CodecId.RAW_FIXED) == 1.0
    everything = bytes(range(256)) * 4
    assert segment_rate(everything, CodecId.RAW_FIXED) == 8.0
    assert segment_rate(b"zzz", CodecId.RAW_FIXED) == 0.0


def test_accounted_rate_counts_header_and_model():
    enc = encode_segment(b"aaaa", CodecId.HUFFMAN)
    expected = (0 + 8 * len(enc.model) + 8 * SEGMENT_HEADER_BYTES) / 4
    assert segment_rate(b"aaaa", CodecId.HUFFMAN, "accounted") == expected > 0


def test_encode_rejects_empty():
    for c in CodecId:
        with pytest.raises(ValueError):
            encode_segment(b"", c)


# -- model layouts ----------------------------------------------------------

def test_raw_model_layouts():
    assert encode_segment(b"ba", CodecId.RAW_FIXED).model == bytes([0, 1]) + b"ab"
    enc = encode_segment(bytes(range(0, 64)), CodecId.RAW_FIXED)
    assert enc.model[0] == 1 and len(enc.model) == 33
    assert enc.model[1:9] == b"\xff" * 8 and enc.model[9:] == bytes(24)


def test_huffman_model_layouts():
    sparse = encode_segment(b"xxyz", CodecId.HUFFMAN).model
    assert sparse == bytes([1, 3, ord("x"), 1, ord("y"), 2, ord("z"), 2])
    dense = encode_segment(bytes(range(40)), CodecId.HUFFMAN).model
    assert dense[0] == 0 and len(dense) == 129
    lengths = huffman.parse_model(dense)
    assert set(lengths) == set(range(40))
    # symbol 0 in the high nibble of the first table byte
    assert dense[1] >> 4 == lengths[0] and dense[1] & 15 == lengths[1]


def test_canonical_codes_ordered_by_length_then_symbol():
    codes = huffman.canonical_codes({200: 3, 3: 2, 7: 1, 100: 3})
    assert codes == {7: (0b0, 1), 3: (0b10, 2), 100: (0b110, 3), 200: (0b111, 3)}


@given(st.binary(min_size=1, max_size=300), st.randoms(use_true_random=False))
def test_canonical_determinism(data, r):
    shuffled = bytearray(data)
    r.shuffle(shuffled)
    a = encode_segment(data, CodecId.HUFFMAN)
    assert a.model == encode_segment(bytes(shuffled), CodecId.HUFFMAN).model
    assert a == encode_segment(data, CodecId.HUFFMAN)
    # histogram handed over in a different insertion order
    s = Sequence(data)
    items = [(sym, int(s.counts[sym])) for sym in s.alphabet]
    r.shuffle(items)
    assert huffman.code_lengths(dict(items)) == huffman.code_lengths(s.counts)


def test_huffman_falls_back_to_raw_beyond_depth_15():
    fib = [1, 1]
    while len(fib) < 18:
        fib.append(fib[-1] + fib[-2])
    data = b"".join(bytes([i]) * c for i, c in enumerate(fib))
    assert max(huffman.code_lengths(Sequence(data).counts).values()) > 15
    enc = encode_segment(data, CodecId.HUFFMAN)
    assert enc.codec == CodecId.RAW_FIXED
    assert enc == encode_segment(data, CodecId.RAW_FIXED)
    assert decode_segment(enc).data == data


# -- LZW --------------------------------------------------------------------

def test_lzw_codes_match_reference():
    for data in [b"TOBEORNOTTOBEORTOBEORNOT", b"aaaaaaaaaa", b"abababababab", bytes(range(256)) * 2]:
        assert lzw.encode_codes(data) == reference_lzw(data)


def test_lzw_code_widths_grow_from_nine_bits():
    data = bytes(range(256)) * 3
    codes = lzw.encode_codes(data)
    bits = lzw.encode(data)
    assert len(bits) == sum((256 + k).bit_length() for k in range(len(codes)))
    assert (256 + 0).bit_length() == 9 and (256 + 256).bit_length() == 10


@given(st.binary(min_size=1, max_size=500), st.data())
def test_lzw_prefix_costs_match_encoding(data, draw):
    ends = sorted(draw.draw(st.sets(st.integers(1, len(data)), min_size=1, max_size=8)))
    start = draw.draw(st.integers(0, ends[0] - 1))
    got = lzw.prefix_costs(data, start, ends)
    assert got == [len(lzw.encode(data[start:e])) for e in ends]


# -- roundtrip --------------------------------------------------------------

@pytest.mark.parametrize("codec", list(CodecId))
def test_roundtrip_exhaustive_short(codec):
    for n in range(1, 6):
        for t in itertools.product(b"abc", repeat=n):
            data = bytes(t)
            assert decode_segment(encode_segment(data, codec)).data == data


@pytest.mark.parametrize("codec", list(CodecId))
@given(data=st.binary(min_size=1, max_size=3000))
@settings(max_examples=60)
def test_roundtrip_random(codec, data):
    enc = encode_segment(data, codec)
    assert len(enc.payload) == bitio.payload_bytes(enc.payload_bit_length)
    assert decode_segment(enc).data == data


@pytest.mark.parametrize("codec", list(CodecId))
def test_roundtrip_long(codec):
    r = random.Random(5)
    for alphabet in (b"ab", bytes(range(256)), b"0123456789"):
        data = bytes(r.choice(alphabet) for _ in range(20000))
        assert decode_segment(encode_segment(data, codec)).data == data


# -- corruption -------------------------------------------------------------

def _replace(enc, **kw):
    fields = dict(codec=enc.codec, model=enc.model, payload_bit_length=enc.payload_bit_length,
                  payload=enc.payload, original_length=enc.original_length)
    fields.update(kw)
    return EncodedSegment(**fields)


@pytest.mark.parametrize("codec", list(CodecId))
def test_truncated_payload_is_corruption(codec):
    enc = encode_segment(b"hello world, hello world, hello", codec)
    with pytest.raises(PayloadUnderrun):
        decode_segment(_replace(enc, payload=enc.payload[:-1]))
    # shortened bit count: either runs out or exposes data bits as padding
    with pytest.raises(CorruptSegment):
        decode_segment(_replace(enc, payload_bit_length=enc.payload_bit_length - 8,
                                payload=enc.payload[:-1]))


@pytest.mark.parametrize("codec", list(CodecId))
def test_extra_payload_is_corruption(codec):
    enc = encode_segment(b"hello world, hello world, hello", codec)
    with pytest.raises(PayloadOverrun):
        decode_segment(_replace(enc, payload=enc.payload + b"\x00"))
    with pytest.raises((PayloadOverrun, CorruptSegment)):
        decode_segment(_replace(enc, payload_bit_length=enc.payload_bit_length + 8,
                                payload=enc.payload + b"\x00"))


def test_huffman_kraft_violation_is_corruption():
    # lengths {1, 2, 3}: Kraft sum 7/8 != 1
    model = bytes([1, 3, 97, 1, 98, 2, 99, 3])
    assert sum(2.0 ** -n for n in (1, 2, 3)) != 1
    enc = EncodedSegment(CodecId.HUFFMAN, model, 3, b"\x00", 3)
    with pytest.raises(BadModel):
        decode_segment(enc)
    # lengths {1, 1, 1}: oversubscribed
    enc = EncodedSegment(CodecId.HUFFMAN, bytes([1, 3, 97, 1, 98, 1, 99, 1]), 3, b"\x00", 3)
    with pytest.raises(BadModel):
        decode_segment(enc)


def test_bad_models_are_corruption():
    for model in [b"", bytes([7]), bytes([1, 2, 97, 1]), bytes([1, 2, 98, 1, 97, 1])]:
        with pytest.raises(BadModel):
            decode_segment(EncodedSegment(CodecId.HUFFMAN, model, 1, b"\x00", 1))
    for model in [b"", bytes([0, 2, 97]), bytes([0, 1, 98, 97]), bytes([1]) + bytes(32)]:
        with pytest.raises(BadModel):
            decode_segment(EncodedSegment(CodecId.RAW_FIXED, model, 1, b"\x00", 1))


def test_raw_index_out_of_alphabet():
    # 3 symbols, 2-bit indices, index 3 is invalid
    enc = EncodedSegment(CodecId.RAW_FIXED, bytes([0, 2]) + b"abc", 2, b"\xc0", 1)
    with pytest.raises(CodeOutOfRange):
        decode_segment(enc)


def test_lzw_code_out_of_range():
    # first code must be a literal
    enc = EncodedSegment(CodecId.LZW, b"", 9, bitio.pack_bits(format(300, "09b")), 1)
    with pytest.raises(CodeOutOfRange):
        decode_segment(enc)
    bits = format(97, "09b") + format(300, "09b")
    enc = EncodedSegment(CodecId.LZW, b"", 18, bitio.pack_bits(bits), 3)
    with pytest.raises(CodeOutOfRange):
        decode_segment(enc)


def test_nonzero_padding_is_corruption():
    enc = encode_segment(b"abc", CodecId.RAW_FIXED)  # 6 payload bits
    bad = bytes([enc.payload[0] | 1])
    with pytest.raises(CorruptSegment):
        decode_segment(_replace(enc, payload=bad))


# -- rates and selection ----------------------------------------------------

def test_best_codec_examples():
    assert best_codec(b"aaaa", {CodecId.RAW_FIXED, CodecId.HUFFMAN}, "ideal") == (CodecId.RAW_FIXED, 0.0)
    assert best_codec(b"aaaaaaab", {CodecId.RAW_FIXED, CodecId.HUFFMAN}, "ideal") == (CodecId.RAW_FIXED, 1.0)
    with pytest.raises(ValueError):
        best_codec(b"abc", set())


def test_best_codec_picks_lzw_on_repetitive_text():
    text = b"it was the best of times, it was the worst of times; " * 200
    codec, rate = best_codec(text, {CodecId.HUFFMAN, CodecId.LZW}, "ideal")
    assert codec == CodecId.LZW
    assert rate < empirical_entropy(text)
    assert rate == segment_rate(text, CodecId.LZW)


@given(st.binary(min_size=1, max_size=2000))
@settings(max_examples=200)
def test_huffman_within_one_bit_of_entropy(data):
    h = empirical_entropy(data)
    r = segment_rate(data, CodecId.HUFFMAN)
    assert h <= r < h + 1


@given(st.binary(min_size=1, max_size=600))
def test_raw_rate_is_ceil_log2_alphabet(data):
    m = Sequence(data).alphabet_size
    r = segment_rate(data, CodecId.RAW_FIXED)
    assert r == math.ceil(math.log2(m)) if m > 1 else r == 0.0
    assert r >= alphabet_entropy_bound(m)


@given(st.binary(min_size=1, max_size=600))
def test_counted_cost_agrees_with_encoder(data):
    s = Sequence(data)
    counts = {sym: int(s.counts[sym]) for sym in s.alphabet}
    for codec in (CodecId.RAW_FIXED, CodecId.HUFFMAN):
        used, payload, model = counted_cost(counts, len(data), codec)
        enc = encode_segment(data, codec)
        assert (used, payload, model) == (enc.codec, enc.payload_bit_length, len(enc.model))


def test_parse_codecs():
    assert parse_codecs("raw,huffman") == {CodecId.RAW_FIXED, CodecId.HUFFMAN}
    assert parse_codecs("lzw+raw+huffman") == ALL_CODECS
    with pytest.raises(ValueError):
        parse_codecs("zstd")
    with pytest.raises(ValueError):
        parse_codecs("")


@given(st.binary(min_size=1, max_size=400), st.sampled_from(list(CodecId)),
       st.sampled_from(["ideal", "accounted"]))
@settings(max_examples=150, deadline=None)
def test_segment_cost_agrees_with_encoder(data, codec, mode):
    enc = encode_segment(data, codec)
    assert segment_cost(data, codec, mode) == (enc.codec, enc.bits(mode))


@given(st.dictionaries(st.integers(0, 255), st.integers(1, 5000), min_size=1, max_size=60))
@settings(max_examples=200, deadline=None)
def test_huffman_cost_matches_code_lengths(counts):
    lengths = huffman.code_lengths(counts)
    expect = None
    if max(lengths.values()) <= huffman.MAX_CODE_LENGTH:
        expect = (sum(counts[s] * n for s, n in lengths.items()), huffman.model_size(len(counts)))
    assert huffman.cost(counts) == expect
    assert huffman.cost_sorted(sorted(counts.values())) == expect


def test_huffman_cost_detects_deep_trees():
    fib = [1, 1]
    while len(fib) < 20:
        fib.append(fib[-1] + fib[-2])
    counts = dict(enumerate(fib))
    assert max(huffman.code_lengths(counts).values()) > huffman.MAX_CODE_LENGTH
    assert huffman.cost(counts) is None


needs_kernels = pytest.mark.skipif(lzw._kernels is None, reason="compiled LZW loops not built")


@needs_kernels
@given(st.binary(max_size=3000), st.data())
@settings(max_examples=150, deadline=None)
def test_compiled_lzw_matches_reference(data, draw):
    assert lzw.encode_codes(data) == lzw.py_encode_codes(data)
    start = draw.draw(st.integers(0, len(data)))
    ends = sorted(draw.draw(st.lists(st.integers(start, len(data)), max_size=8)))
    assert lzw.prefix_costs(data, start, ends) == lzw.py_prefix_costs(data, start, ends)


def _decode_outcome(decoder, payload, bit_length, n):
    reader = bitio.BitReader(payload, bit_length)
    try:
        return decoder(reader, n), reader.pos
    except (CodeOutOfRange, CorruptSegment, PayloadOverrun, PayloadUnderrun) as e:
        return type(e), str(e)


@needs_kernels
@given(st.binary(min_size=1, max_size=800), st.integers(-3, 3), st.data())
@settings(max_examples=200, deadline=None)
def test_compiled_lzw_decode_matches_reference(data, dn, draw):
    bits = lzw.encode(data)
    if draw.draw(st.booleans()):
        # flip a few bits to exercise the corruption paths
        flips = draw.draw(st.lists(st.integers(0, len(bits) - 1), max_size=4))
        b = list(bits)
        for f in flips:
            b[f] = "1" if b[f] == "0" else "0"
        bits = "".join(b)
    n = max(1, len(data) + dn)
    payload = bitio.pack_bits(bits)
    assert (_decode_outcome(lzw.decode, payload, len(bits), n)
            == _decode_outcome(lzw.py_decode, payload, len(bits), n))
