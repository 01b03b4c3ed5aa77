"""PARC archives: plan a byte string, write it, read it back.

The byte layout is documented in :mod:`parc.layout`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitio import payload_bytes
from .codecs import CodecId, EncodedSegment, decode_segment
from .errors import (
    BadMagic,
    CorruptSegment,
    MalformedHeader,
    SegmentSumMismatch,
    TruncatedArchive,
    UnsupportedVersion,
)
from .layout import HEADER, HEADER_BYTES, MAGIC, SEGMENT, SEGMENT_HEADER_BYTES, VERSION
from .partition import OptimizerConfig, PartitionPlan, make_plan


@dataclass(frozen=True)
class ArchiveHeader:
    magic: bytes
    version: int
    flags: int
    original_length: int
    segment_count: int


@dataclass(frozen=True)
class SegmentEntry:
    segment_length: int
    codec_id: int
    model_byte_length: int
    payload_bit_length: int
    offset: int  # file offset of the entry's fixed header

    @property
    def accounted_bits(self) -> int:
        return self.payload_bit_length + 8 * self.model_byte_length + 8 * SEGMENT_HEADER_BYTES

    @property
    def accounted_rate(self) -> float:
        return self.accounted_bits / self.segment_length

    @property
    def ideal_rate(self) -> float:
        return self.payload_bit_length / self.segment_length


@dataclass(frozen=True)
class ArchiveListing:
    """Segment table of an archive, read without decoding any payload."""

    header: ArchiveHeader
    entries: tuple
    archive_bytes: int

    @property
    def segment_count(self) -> int:
        return len(self.entries)

    @property
    def weights(self) -> list:
        l = self.header.original_length
        return [e.segment_length / l for e in self.entries]

    @property
    def total_bits(self) -> int:
        return sum(e.accounted_bits for e in self.entries)

    @property
    def overall_rate(self) -> float:
        """Accounted bits per original symbol; 0.0 for an empty archive."""
        l = self.header.original_length
        return self.total_bits / l if l else 0.0


def write_archive(plan: PartitionPlan) -> bytes:
    encoded = plan.encoded
    l = plan.partition.total_length
    out = bytearray(HEADER.pack(MAGIC, VERSION, 0, l, len(encoded)))
    for enc in encoded:
        out += SEGMENT.pack(enc.original_length, int(enc.codec), len(enc.model),
                            enc.payload_bit_length)
        out += enc.model
        out += enc.payload
    return bytes(out)


def compress(data: bytes, strategy: str = "dp", cfg: OptimizerConfig = OptimizerConfig(),
             **params) -> bytes:
    """Archive ``data``; ``params`` are the strategy knobs of :func:`make_plan`."""
    return write_archive(make_plan(data, strategy, cfg, **params))


def _read_header(buf) -> ArchiveHeader:
    if len(buf) < HEADER_BYTES:
        if bytes(buf[:len(MAGIC)]) != MAGIC[:len(buf)]:
            raise BadMagic("not a PARC archive")
        raise TruncatedArchive(f"archive is {len(buf)} bytes, header needs {HEADER_BYTES}")
    magic, version, flags, length, count = HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise BadMagic(f"bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedVersion(f"archive version {version}, only {VERSION} is supported")
    if flags:
        raise MalformedHeader(f"reserved flags byte is {flags:#x}, must be 0")
    if (length == 0) != (count == 0):
        raise SegmentSumMismatch(f"{count} segments for {length} symbols")
    return ArchiveHeader(magic, version, flags, length, count)


def _entries(buf, header: ArchiveHeader):
    """Yield ``(entry, model_slice, payload_slice)`` for every segment."""
    pos = HEADER_BYTES
    total = 0
    for k in range(header.segment_count):
        if pos + SEGMENT_HEADER_BYTES > len(buf):
            raise TruncatedArchive(f"segment {k} header runs past end of archive")
        length, codec, model_len, payload_bits = SEGMENT.unpack_from(buf, pos)
        if length == 0:
            raise CorruptSegment(f"segment {k} has length 0")
        if codec not in tuple(CodecId):
            raise MalformedHeader(f"segment {k} has unknown codec id {codec}")
        entry = SegmentEntry(length, codec, model_len, payload_bits, pos)
        start = pos + SEGMENT_HEADER_BYTES
        end = start + model_len + payload_bytes(payload_bits)
        if end > len(buf):
            raise TruncatedArchive(f"segment {k} data runs past end of archive")
        total += length
        if total > header.original_length:
            raise SegmentSumMismatch(
                f"segments exceed original length {header.original_length}"
            )
        yield entry, buf[start:start + model_len], buf[start + model_len:end]
        pos = end
    if total != header.original_length:
        raise SegmentSumMismatch(
            f"segments cover {total} symbols, header says {header.original_length}"
        )
    if pos != len(buf):
        raise MalformedHeader(f"{len(buf) - pos} trailing bytes after last segment")


def inspect(archive: bytes) -> ArchiveListing:
    buf = memoryview(archive)
    header = _read_header(buf)
    entries = tuple(e for e, _, _ in _entries(buf, header))
    return ArchiveListing(header, entries, len(archive))


def decompress(archive: bytes) -> bytes:
    buf = memoryview(archive)
    header = _read_header(buf)
    out = bytearray()
    for entry, model, payload in _entries(buf, header):
        enc = EncodedSegment(CodecId(entry.codec_id), bytes(model),
                             entry.payload_bit_length, bytes(payload), entry.segment_length)
        try:
            out += decode_segment(enc).data
        except CorruptSegment as e:
            raise type(e)(f"segment at offset {entry.offset}: {e}") from None
    return bytes(out)
