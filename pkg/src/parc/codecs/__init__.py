"""Per-segment coders and multi-codec selection.

Each segment of an archive is coded independently by one of the codecs
below; ids are part of the file format and are never renumbered.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..bitio import BitReader, pack_bits, payload_bytes
from ..errors import PayloadOverrun, PayloadUnderrun, CorruptSegment
from ..layout import SEGMENT_HEADER_BYTES
from ..memo import Memo
from ..model import Sequence, as_sequence
from . import huffman, lzw, raw

MODES = ("ideal", "accounted")


class CodecId(enum.IntEnum):
    RAW_FIXED = 0
    HUFFMAN = 1
    LZW = 2


CODEC_NAMES = {"raw": CodecId.RAW_FIXED, "huffman": CodecId.HUFFMAN, "lzw": CodecId.LZW}
ALL_CODECS = frozenset(CodecId)


def codec_name(codec) -> str:
    return {v: k for k, v in CODEC_NAMES.items()}[CodecId(codec)]


def parse_codecs(text: str) -> frozenset:
    """``"raw,huffman"`` -> ``{RAW_FIXED, HUFFMAN}``."""
    names = [t.strip().lower() for t in text.replace("+", ",").split(",") if t.strip()]
    if not names:
        raise ValueError("no codecs given")
    unknown = [n for n in names if n not in CODEC_NAMES]
    if unknown:
        raise ValueError(f"unknown codec(s): {', '.join(unknown)}")
    return frozenset(CODEC_NAMES[n] for n in names)


def format_codecs(codecs) -> str:
    return "+".join(codec_name(c) for c in sorted(codecs))


@dataclass(frozen=True)
class EncodedSegment:
    codec: CodecId
    model: bytes
    payload_bit_length: int
    payload: bytes
    original_length: int

    @property
    def ideal_bits(self) -> int:
        return self.payload_bit_length

    @property
    def accounted_bits(self) -> int:
        return self.payload_bit_length + 8 * len(self.model) + 8 * SEGMENT_HEADER_BYTES

    def bits(self, mode: str) -> int:
        return self.ideal_bits if mode == "ideal" else self.accounted_bits


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def encode_segment(seq, codec) -> EncodedSegment:
    """Encode one segment.

    A HUFFMAN request whose optimal tree is deeper than 15 levels is coded
    as RAW_FIXED instead; the returned ``codec`` says which one was used.
    """
    seq = as_sequence(seq)
    if seq.length == 0:
        raise ValueError("cannot encode an empty segment")
    codec = CodecId(codec)
    return _ENCODED.get((seq.digest, seq.length, codec), lambda: _encode(seq, codec))


_ENCODED = Memo(8192, weigh=lambda enc: len(enc.payload) + len(enc.model), max_weight=64 << 20)
_COSTS = Memo(8192)


def _encode(seq: Sequence, codec: CodecId) -> EncodedSegment:
    data = seq.data
    if codec == CodecId.HUFFMAN:
        coded = huffman.encode(data, seq.counts)
        if coded is None:
            codec = CodecId.RAW_FIXED
        else:
            model, bits = coded
    if codec == CodecId.RAW_FIXED:
        model, bits = raw.encode(data, seq.alphabet)
    elif codec == CodecId.LZW:
        model, bits = b"", lzw.encode(data)
    return EncodedSegment(codec, model, len(bits), pack_bits(bits), seq.length)


def decode_segment(enc: EncodedSegment) -> Sequence:
    n = enc.original_length
    if n < 1:
        raise CorruptSegment("segment length must be >= 1")
    expected = payload_bytes(enc.payload_bit_length)
    if len(enc.payload) < expected:
        raise PayloadUnderrun(
            f"{len(enc.payload)} payload bytes for {enc.payload_bit_length} bits"
        )
    if len(enc.payload) > expected:
        raise PayloadOverrun(
            f"{len(enc.payload)} payload bytes for {enc.payload_bit_length} bits"
        )
    reader = BitReader(enc.payload, enc.payload_bit_length)
    if not reader.padding_is_zero():
        raise CorruptSegment("nonzero padding bits after payload")
    try:
        codec = CodecId(enc.codec)
    except ValueError:
        raise CorruptSegment(f"unknown codec id {enc.codec}") from None
    if codec == CodecId.RAW_FIXED:
        data = raw.decode(enc.model, reader, n)
    elif codec == CodecId.HUFFMAN:
        data = huffman.decode(enc.model, reader, n)
    else:
        if enc.model:
            raise CorruptSegment("LZW segments carry no model")
        data = lzw.decode(reader, n)
    return Sequence(data)


def segment_rate(seq, codec, mode: str = "ideal") -> float:
    _check_mode(mode)
    seq = as_sequence(seq)
    return encode_segment(seq, codec).bits(mode) / seq.length


def best_codec(seq, allowed, mode: str = "ideal"):
    """Cheapest allowed codec for ``seq`` and its rate; ties go to the lower id."""
    _check_mode(mode)
    allowed = sorted(CodecId(c) for c in allowed)
    if not allowed:
        raise ValueError("allowed codec set is empty")
    seq = as_sequence(seq)
    best = None
    for codec in allowed:
        bits = encode_segment(seq, codec).bits(mode)
        if best is None or bits < best[1]:
            best = (codec, bits)
    return best[0], best[1] / seq.length


def segment_cost(seq, codec, mode: str = "accounted"):
    """``(codec actually used, bits in mode)`` of :func:`encode_segment`, without encoding."""
    _check_mode(mode)
    seq = as_sequence(seq)
    if seq.length == 0:
        raise ValueError("cannot encode an empty segment")
    codec = CodecId(codec)
    used, payload, model = _COSTS.get((seq.digest, seq.length, codec), lambda: _cost(seq, codec))
    if mode == "ideal":
        return used, payload
    return used, payload + 8 * model + 8 * SEGMENT_HEADER_BYTES


def _cost(seq: Sequence, codec: CodecId):
    if codec == CodecId.LZW:
        # as expensive as the parse itself, so encode and keep the result
        return codec, encode_segment(seq, codec).payload_bit_length, 0
    c = seq.counts
    return counted_cost(sorted(c[c > 0].tolist()), seq.length, codec)


def counted_cost(counts, n: int, codec):
    """``(codec actually used, payload_bits, model_bytes)`` from a histogram.

    ``counts`` maps symbol -> positive count, or is the ascending list of
    the positive counts. Covers the codecs whose cost depends on symbol
    counts only (RAW_FIXED, HUFFMAN) and agrees bit for bit with
    :func:`encode_segment`.
    """
    codec = CodecId(codec)
    if codec == CodecId.HUFFMAN:
        weights = sorted(counts.values()) if isinstance(counts, dict) else counts
        c = huffman.cost_sorted(weights)
        if c is not None:
            return (codec,) + c
        codec = CodecId.RAW_FIXED
    if codec == CodecId.RAW_FIXED:
        return (codec,) + raw.cost(len(counts), n)
    raise ValueError(f"{codec.name} cost is not a function of counts")


__all__ = [
    "ALL_CODECS",
    "CODEC_NAMES",
    "CodecId",
    "EncodedSegment",
    "MODES",
    "best_codec",
    "codec_name",
    "counted_cost",
    "decode_segment",
    "encode_segment",
    "format_codecs",
    "parse_codecs",
    "segment_cost",
    "segment_rate",
]
