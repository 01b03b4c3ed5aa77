"""LZW over bytes with an unbounded, per-segment dictionary.

The dictionary starts with the 256 single-byte strings. The ``k``-th code
of a segment (counting from 0) is written with ``(256 + k).bit_length()``
bits, the width of the largest code the encoder could emit at that moment;
widths therefore start at 9 and the decoder can derive them without
tracking the encoder. No model bytes are stored.

The byte loops below are the reference implementation. When the compiled
``_lzw_kernels`` extension is importable the public functions use it
instead; both produce identical results.
"""

import numpy as np

from ..bitio import BitReader
from ..errors import CodeOutOfRange, CorruptSegment, PayloadOverrun, PayloadUnderrun

try:
    from . import _lzw_kernels as _kernels
except ImportError:  # not built
    _kernels = None


def py_encode_codes(data: bytes) -> list:
    codes = []
    table = {}
    next_code = 256
    w = -1
    for c in data:
        if w < 0:
            w = c
            continue
        key = (w << 8) | c
        hit = table.get(key)
        if hit is not None:
            w = hit
        else:
            codes.append(w)
            table[key] = next_code
            next_code += 1
            w = c
    if w >= 0:
        codes.append(w)
    return codes


def _width_groups(count: int):
    """``(first, stop, width)`` runs of equal code width covering codes ``0..count-1``."""
    first, width = 0, 9
    while first < count:
        stop = min(count, (1 << width) - 256)
        yield first, stop, width
        first, width = stop, width + 1


def payload_bits(count: int) -> int:
    """Bits taken by the first ``count`` codes of a segment."""
    return sum((stop - first) * width for first, stop, width in _width_groups(count))


def encode(data: bytes) -> str:
    if _kernels is None:
        codes = np.asarray(py_encode_codes(data), dtype=np.int64)
    else:
        codes = _kernels.encode_codes(data)
    parts = []
    for first, stop, width in _width_groups(len(codes)):
        shifts = np.arange(width - 1, -1, -1)
        parts.append(((codes[first:stop, None] >> shifts) & 1).astype(np.uint8).ravel())
    if not parts:
        return ""
    return (np.concatenate(parts) + ord("0")).tobytes().decode("ascii")


def py_prefix_costs(data: bytes, start: int, ends) -> list:
    """Payload bits of ``data[start:e]`` for every ``e`` in ascending ``ends``.

    Encoding a prefix emits exactly the codes the full pass has emitted by
    then plus one flush of the pending phrase, so a single pass serves all
    ends.
    """
    out = []
    get = {}.get
    table = get.__self__
    next_code = 256
    width, grow_at = 9, 512
    bits = 0
    pos = start
    w = -1
    for e in ends:
        if pos < e:
            chunk = data[pos:e]
            if w < 0:
                w = chunk[0]
                chunk = chunk[1:]
            for c in chunk:
                key = (w << 8) | c
                hit = get(key)
                if hit is not None:
                    w = hit
                else:
                    bits += width
                    table[key] = next_code
                    next_code += 1
                    if next_code == grow_at:
                        width += 1
                        grow_at <<= 1
                    w = c
            pos = e
        out.append(bits + (width if w >= 0 else 0))
    return out


def _read_codes(digits: np.ndarray, most: int) -> np.ndarray:
    """Up to ``most`` whole codes from the front of a 0/1 array."""
    codes = [np.zeros(0, dtype=np.int64)]
    bit = 0
    for first, stop, width in _width_groups(most):
        fit = min(stop - first, (len(digits) - bit) // width)
        if fit:
            block = digits[bit:bit + fit * width].reshape(fit, width).astype(np.int64)
            codes.append(block @ np.left_shift(1, np.arange(width - 1, -1, -1)))
            bit += fit * width
        if fit < stop - first:
            break
    return np.concatenate(codes)


def encode_codes(data: bytes) -> list:
    if _kernels is None:
        return py_encode_codes(data)
    return _kernels.encode_codes(data).tolist()


def prefix_costs(data: bytes, start: int, ends) -> list:
    """Payload bits of ``data[start:e]`` for every ``e`` in ascending ``ends``."""
    if _kernels is None:
        return py_prefix_costs(data, start, ends)
    ends = list(ends)
    if ends and not start <= ends[-1] <= len(data):
        raise ValueError(f"end {ends[-1]} outside data of length {len(data)}")
    return _kernels.prefix_costs(data, start, ends)


def decode(reader: BitReader, n: int) -> bytes:
    if _kernels is None:
        return py_decode(reader, n)
    codes = _read_codes(reader.digits(), n)
    status, out, used, detail = _kernels.decode_codes(codes, n)
    if status == 1:
        raise CodeOutOfRange(f"first LZW code {detail} is not a literal")
    if status == 2:
        raise CodeOutOfRange(f"LZW code {detail} beyond dictionary size {255 + used}")
    if status == 3:
        raise PayloadUnderrun(f"LZW payload ran out after {detail} of {n} symbols")
    if status == 4:
        raise CorruptSegment(f"LZW output overshoots segment length ({detail} > {n})")
    pos = payload_bits(used)
    if pos < reader.bit_length:
        raise PayloadOverrun(f"LZW payload has {reader.bit_length - pos} unused bits")
    reader.pos = pos
    return out


def py_decode(reader: BitReader, n: int) -> bytes:
    codes = _read_codes(reader.digits(), n).tolist()
    out = bytearray()
    entries = [bytes([i]) for i in range(256)]
    append = entries.append
    size = 256
    produced = 0
    used = 0
    prev = None
    for code in codes:
        if produced >= n:
            break
        if prev is None:
            if code >= 256:
                raise CodeOutOfRange(f"first LZW code {code} is not a literal")
            entry = entries[code]
        elif code < size:
            entry = entries[code]
            append(prev + entry[:1])
            size += 1
        elif code == size:
            entry = prev + prev[:1]
            append(entry)
            size += 1
        else:
            raise CodeOutOfRange(f"LZW code {code} beyond dictionary size {size}")
        out += entry
        produced += len(entry)
        prev = entry
        used += 1
    if produced < n:
        raise PayloadUnderrun(f"LZW payload ran out after {produced} of {n} symbols")
    if produced != n:
        raise CorruptSegment(f"LZW output overshoots segment length ({produced} > {n})")
    pos = payload_bits(used)
    if pos < reader.bit_length:
        raise PayloadOverrun(f"LZW payload has {reader.bit_length - pos} unused bits")
    reader.pos = pos
    return bytes(out)
