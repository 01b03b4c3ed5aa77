"""Bounded LRU memo tables keyed on content digests.

Plans for several codec sets, modes or strategies over one input keep
pricing and encoding the same segments. Keys hold a 128-bit BLAKE2b digest
of the bytes instead of the bytes themselves, so a table never keeps large
inputs alive.
"""

from __future__ import annotations

import hashlib
from collections import OrderedDict

_TABLES = []


def digest(data: bytes) -> bytes:
    return hashlib.blake2b(data, digest_size=16).digest()


class Memo:
    """LRU table holding at most ``size`` entries.

    With ``weigh`` given, the summed weights of the entries (for instance
    payload bytes) are also kept within ``max_weight``.
    """

    def __init__(self, size: int, weigh=None, max_weight: int = 0):
        self.size = size
        self.weigh = weigh
        self.max_weight = max_weight
        self.weight = 0
        self._table = OrderedDict()
        _TABLES.append(self)

    def get(self, key, compute):
        """Value for ``key``, calling ``compute()`` on a miss."""
        value = self.lookup(key)
        if value is None:
            value = compute()
            self.put(key, value)
        return value

    def lookup(self, key):
        """Value for ``key`` or None."""
        table = self._table
        if key in table:
            table.move_to_end(key)
            return table[key]
        return None

    def put(self, key, value) -> None:
        table = self._table
        if key in table:
            self._drop(key)
        table[key] = value
        if self.weigh:
            self.weight += self.weigh(value)
        while table and (len(table) > self.size
                         or (self.weigh and self.weight > self.max_weight)):
            self._drop(next(iter(table)))

    def _drop(self, key) -> None:
        value = self._table.pop(key)
        if self.weigh:
            self.weight -= self.weigh(value)

    def __contains__(self, key):
        return key in self._table

    def clear(self) -> None:
        self._table.clear()
        self.weight = 0

    def __len__(self):
        return len(self._table)


def clear_all() -> None:
    """Empty every memo table (benchmarks use this for cold-start timings)."""
    for t in _TABLES:
        t.clear()
