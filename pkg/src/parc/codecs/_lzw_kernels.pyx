# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled LZW loops; :mod:`parc.codecs.lzw` holds the reference versions."""

from libc.stdint cimport int64_t, int32_t, uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

import numpy as np


cdef struct Table:
    int64_t *keys
    int32_t *values
    uint64_t mask
    int shift


cdef int table_init(Table *t, Py_ssize_t entries) except -1:
    # open addressing, kept at most half full; the dictionary never has
    # more new entries than the segment has symbols
    cdef uint64_t size = 16
    cdef int bits = 4
    while size < 2 * <uint64_t>(entries + 1):
        size <<= 1
        bits += 1
    t.shift = 64 - bits
    t.keys = <int64_t *> malloc(size * sizeof(int64_t))
    t.values = <int32_t *> malloc(size * sizeof(int32_t))
    if t.keys == NULL or t.values == NULL:
        free(t.keys)
        free(t.values)
        raise MemoryError()
    memset(t.keys, 0xff, size * sizeof(int64_t))
    t.mask = size - 1
    return 0


cdef inline uint64_t slot(Table *t, int64_t key) nogil:
    # Fibonacci hashing: the top bits of the product
    cdef uint64_t h = (<uint64_t>key * 0x9E3779B97F4A7C15ULL) >> t.shift
    while t.keys[h] != -1 and t.keys[h] != key:
        h = (h + 1) & t.mask
    return h


def prefix_costs(const unsigned char[:] data, Py_ssize_t start, ends):
    cdef Table t
    cdef Py_ssize_t pos = start, e, last
    cdef int64_t key, bits = 0, width = 9, grow_at = 512, next_code = 256, w = -1
    cdef uint64_t h
    cdef unsigned char c
    out = []
    ends = list(ends)
    last = ends[len(ends) - 1] if ends else start
    table_init(&t, last - start)
    try:
        for e_obj in ends:
            e = e_obj
            while pos < e:
                c = data[pos]
                pos += 1
                if w < 0:
                    w = c
                    continue
                key = (w << 8) | c
                h = slot(&t, key)
                if t.keys[h] == key:
                    w = t.values[h]
                else:
                    bits += width
                    t.keys[h] = key
                    t.values[h] = <int32_t> next_code
                    next_code += 1
                    if next_code == grow_at:
                        width += 1
                        grow_at <<= 1
                    w = c
            out.append(bits + (width if w >= 0 else 0))
    finally:
        free(t.keys)
        free(t.values)
    return out


def encode_codes(const unsigned char[:] data):
    cdef Py_ssize_t n = data.shape[0], p
    cdef Table t
    cdef int64_t key, next_code = 256, w = -1
    cdef uint64_t h
    cdef unsigned char c
    codes = np.empty(n, dtype=np.int64)
    cdef int64_t[:] out = codes
    cdef Py_ssize_t k = 0
    if n == 0:
        return codes
    table_init(&t, n)
    try:
        w = data[0]
        for p in range(1, n):
            c = data[p]
            key = (w << 8) | c
            h = slot(&t, key)
            if t.keys[h] == key:
                w = t.values[h]
            else:
                out[k] = w
                k += 1
                t.keys[h] = key
                t.values[h] = <int32_t> next_code
                next_code += 1
                w = c
        out[k] = w
        k += 1
    finally:
        free(t.keys)
        free(t.values)
    return codes[:k]


def decode_codes(const int64_t[:] codes, Py_ssize_t n):
    """``(status, bytes, codes used, detail)``; status 0 is success.

    Statuses: 1 first code not a literal, 2 code beyond the dictionary,
    3 ran out of codes, 4 overshoot. ``detail`` is the offending code or the
    number of symbols produced.
    """
    cdef Py_ssize_t m = codes.shape[0], k, produced = 0, length, q
    cdef int64_t code, size = 256, prev = -1, cur
    # entry e >= 256 is entry prefix[e] followed by byte last[e]
    cdef int64_t[:] prefix = np.empty(m + 257, dtype=np.int64)
    cdef int64_t[:] lengths = np.empty(m + 257, dtype=np.int64)
    cdef unsigned char[:] last = np.empty(m + 257, dtype=np.uint8)
    cdef unsigned char[:] first = np.empty(m + 257, dtype=np.uint8)
    out_arr = np.empty(n, dtype=np.uint8)
    cdef unsigned char[:] out = out_arr
    for k in range(256):
        lengths[k] = 1
        last[k] = k
        first[k] = k
    for k in range(m):
        if produced >= n:
            return 0, out_arr.tobytes(), k, produced
        code = codes[k]
        if prev < 0:
            if code < 0 or code >= 256:
                return 1, b"", k, code
        elif code < size:
            prefix[size] = prev
            last[size] = first[code]
            first[size] = first[prev]
            lengths[size] = lengths[prev] + 1
            size += 1
        elif code == size:
            prefix[size] = prev
            last[size] = first[prev]
            first[size] = first[prev]
            lengths[size] = lengths[prev] + 1
            size += 1
        else:
            return 2, b"", k, code
        length = lengths[code]
        if produced + length > n:
            return 4, b"", k, produced + length
        cur = code
        q = produced + length - 1
        while cur >= 256:
            out[q] = last[cur]
            q -= 1
            cur = prefix[cur]
        out[q] = <unsigned char> cur
        produced += length
        prev = code
    if produced < n:
        return 3, b"", m, produced
    return 0, out_arr.tobytes(), m, produced
