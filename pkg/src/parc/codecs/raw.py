"""Fixed-width coding of indices into the segment's sorted alphabet.

Model layouts (first byte is the form tag):

    0x00 LIST    count-1:u8, then the ``count`` symbols in increasing order
    0x01 BITMAP  32 bytes, bit ``s`` (MSB-first) set iff symbol ``s`` occurs

LIST is used for alphabets of up to 31 symbols, BITMAP beyond that; the two
sizes cross over there (2 + m vs 33 bytes).
"""

import numpy as np

from ..bitio import BitReader
from ..errors import BadModel, PayloadOverrun, PayloadUnderrun, CodeOutOfRange

LIST, BITMAP = 0, 1
LIST_MAX = 31

_FORMATS = {w: [format(i, f"0{w}b") for i in range(1 << w)] for w in range(1, 9)}


def symbol_width(m: int) -> int:
    """Bits per symbol for an alphabet of ``m`` symbols: ``ceil(log2 m)``."""
    return (m - 1).bit_length() if m > 0 else 0


def model_size(m: int) -> int:
    return 2 + m if m <= LIST_MAX else 33


def build_model(symbols) -> bytes:
    symbols = sorted(symbols)
    if len(symbols) <= LIST_MAX:
        return bytes([LIST, len(symbols) - 1]) + bytes(symbols)
    bitmap = bytearray(32)
    for s in symbols:
        bitmap[s >> 3] |= 0x80 >> (s & 7)
    return bytes([BITMAP]) + bytes(bitmap)


def parse_model(model: bytes) -> list:
    if not model:
        raise BadModel("empty RAW model")
    tag = model[0]
    if tag == LIST:
        if len(model) < 2 or len(model) != 2 + model[1] + 1:
            raise BadModel("RAW list model has wrong length")
        symbols = list(model[2:])
        if any(a >= b for a, b in zip(symbols, symbols[1:])):
            raise BadModel("RAW list symbols not strictly increasing")
        return symbols
    if tag == BITMAP:
        if len(model) != 33:
            raise BadModel("RAW bitmap model has wrong length")
        symbols = [s for s in range(256) if model[1 + (s >> 3)] & (0x80 >> (s & 7))]
        if not symbols:
            raise BadModel("RAW bitmap model is empty")
        return symbols
    raise BadModel(f"unknown RAW model form {tag:#x}")


def cost(m: int, n: int):
    """``(payload_bits, model_bytes)`` for ``n`` symbols over ``m`` distinct values."""
    return symbol_width(m) * n, model_size(m)


def encode(data: bytes, symbols):
    symbols = sorted(symbols)
    width = symbol_width(len(symbols))
    model = build_model(symbols)
    if width == 0:
        return model, ""
    table = bytearray(256)
    for i, s in enumerate(symbols):
        table[s] = i
    fmt = _FORMATS[width]
    return model, "".join([fmt[i] for i in data.translate(table)])


def decode(model: bytes, reader: BitReader, n: int) -> bytes:
    symbols = parse_model(model)
    width = symbol_width(len(symbols))
    need = width * n
    if reader.bit_length < need:
        raise PayloadUnderrun(f"RAW payload has {reader.bit_length} bits, needs {need}")
    if reader.bit_length > need:
        raise PayloadOverrun(f"RAW payload has {reader.bit_length} bits, needs {need}")
    if width == 0:
        return bytes(symbols) * n
    m = len(symbols)
    digits = reader.digits()
    place = np.left_shift(1, np.arange(width - 1, -1, -1))
    idx = digits.reshape(n, width).astype(np.int64) @ place
    bad = np.flatnonzero(idx >= m)
    if bad.size:
        raise CodeOutOfRange(f"RAW index {int(idx[bad[0]])} outside alphabet of {m}")
    reader.pos = need
    return np.asarray(symbols, dtype=np.uint8)[idx].tobytes()
