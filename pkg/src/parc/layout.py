"""Fixed byte layout of PARC archives.

    ARCHIVE  := HEADER ENTRY*
    HEADER   := magic[4]="PARC" version:u8=1 flags:u8=0
                original_length:u64le segment_count:u32le           (18 bytes)
    ENTRY    := segment_length:u64le codec_id:u8 model_byte_length:u32le
                payload_bit_length:u64le                            (21 bytes)
                model[model_byte_length]
                payload[ceil(payload_bit_length / 8)]

Payload bits are packed most-significant-bit first and zero padded.
"""

import struct

MAGIC = b"PARC"
VERSION = 1

HEADER = struct.Struct("<4sBBQI")
SEGMENT = struct.Struct("<QBIQ")

HEADER_BYTES = HEADER.size
SEGMENT_HEADER_BYTES = SEGMENT.size

assert HEADER_BYTES == 18
assert SEGMENT_HEADER_BYTES == 21
