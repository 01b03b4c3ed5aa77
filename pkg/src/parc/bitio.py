"""MSB-first bit packing.

Bits are staged as ``'0'``/``'1'`` strings: CPython converts those to and from
integers in linear time, which beats shifting an accumulator bit by bit.
"""

import numpy as np


def pack_bits(bits: str) -> bytes:
    """Pack a bit string MSB-first, zero padding the final byte."""
    if not bits:
        return b""
    nbytes = (len(bits) + 7) // 8
    return int(bits.ljust(8 * nbytes, "0"), 2).to_bytes(nbytes, "big")


def unpack_bits(payload: bytes) -> str:
    if not payload:
        return ""
    return bin(int.from_bytes(payload, "big"))[2:].zfill(8 * len(payload))


def payload_bytes(bit_length: int) -> int:
    return (bit_length + 7) // 8


class BitReader:
    """Reads fixed-width unsigned integers from a packed payload."""

    def __init__(self, payload: bytes, bit_length: int):
        self.payload = payload
        self.bit_length = bit_length
        self.pos = 0
        self._bits = None

    @property
    def bits(self) -> str:
        if self._bits is None:
            self._bits = unpack_bits(self.payload)
        return self._bits

    def digits(self) -> np.ndarray:
        """The first ``bit_length`` bits as a 0/1 ``uint8`` array."""
        return np.unpackbits(np.frombuffer(self.payload, dtype=np.uint8))[:self.bit_length]

    @property
    def remaining(self) -> int:
        return self.bit_length - self.pos

    def read(self, width: int) -> int:
        if width == 0:
            return 0
        if self.pos + width > self.bit_length:
            raise EOFError
        v = int(self.bits[self.pos:self.pos + width], 2)
        self.pos += width
        return v

    def padding_is_zero(self) -> bool:
        full = self.bit_length // 8
        tail = self.payload[full:]
        if not tail:
            return True
        extra = 8 * len(tail) - (self.bit_length - 8 * full)
        return int.from_bytes(tail, "big") & ((1 << extra) - 1) == 0
