"""Seeded zero-order and piecewise-stationary sources.

Random numbers come from SplitMix64 so that any implementation can
reproduce a sequence exactly::

    GAMMA = 0x9E3779B97F4A7C15
    state_i = seed + i * GAMMA                      (mod 2**64), i = 1, 2, ...
    z = state_i
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9        (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB        (mod 2**64)
    x_i = z ^ (z >> 31)

Symbol ``p`` (0-based) of a sequence uses ``x_(p+1)`` turned into
``u = (x >> 11) / 2**53`` in [0, 1). A uniform source over ``n`` symbols
picks ``alphabet[floor(u * n)]``; a categorical source picks the first
symbol whose cumulative weight exceeds ``u``. Piecewise sources draw all
pieces from the one stream of their own seed (piece seeds are ignored).

Sources are also described in a small INI text format, one section per
named source::

    [abcd]
    kind = piecewise
    seed = 7
    piece1 = 10000 uniform ab
    piece2 = 10000 uniform cd

    [skewed]
    kind = categorical
    alphabet = 0x61,0x62,0x63
    weights = 0.8, 0.15, 0.05
    length = 20000
    seed = 3

``alphabet`` is literal Latin-1 text (``ab``), a comma list of hex bytes
(``0x61,0x62``) or an inclusive hex range (``0x00-0xff``). Piece lines are
``length kind alphabet [weights]`` with comma-separated weights.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import Sequence

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
KINDS = ("uniform", "categorical", "piecewise")


def splitmix64(seed: int, count: int, start: int = 1) -> np.ndarray:
    """Outputs ``x_start .. x_(start+count-1)`` of the generator, as uint64."""
    i = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + i * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def unit_floats(seed: int, count: int, start: int = 1) -> np.ndarray:
    return (splitmix64(seed, count, start) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


@dataclass(frozen=True)
class SourceSpec:
    kind: str
    alphabet: bytes = b""
    weights: tuple = ()
    pieces: tuple = ()  # (length, SourceSpec) pairs
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "alphabet", bytes(self.alphabet))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "pieces", tuple((int(n), s) for n, s in self.pieces))
        if self.kind == "piecewise":
            if not self.pieces:
                raise ValueError("piecewise source needs pieces")
            for n, sub in self.pieces:
                if n < 0:
                    raise ValueError("piece lengths must be >= 0")
                if sub.kind == "piecewise":
                    raise ValueError("pieces cannot themselves be piecewise")
            return
        if not self.alphabet:
            raise ValueError(f"{self.kind} source needs a nonempty alphabet")
        if self.kind == "categorical":
            if len(self.weights) != len(self.alphabet):
                raise ValueError("weights and alphabet differ in length")
            if any(w < 0 for w in self.weights):
                raise ValueError("weights must be >= 0")
            if abs(math.fsum(self.weights) - 1.0) > 1e-9:
                raise ValueError("weights must sum to 1")

    @property
    def total_length(self) -> Optional[int]:
        return sum(n for n, _ in self.pieces) if self.kind == "piecewise" else None


def uniform(alphabet, seed: int = 0) -> SourceSpec:
    return SourceSpec("uniform", bytes(alphabet), seed=seed)


def categorical(alphabet, weights, seed: int = 0) -> SourceSpec:
    return SourceSpec("categorical", bytes(alphabet), tuple(weights), seed=seed)


def piecewise(pieces, seed: int = 0) -> SourceSpec:
    return SourceSpec("piecewise", pieces=tuple(pieces), seed=seed)


def _draw(spec: SourceSpec, u: np.ndarray) -> np.ndarray:
    alphabet = np.frombuffer(spec.alphabet, dtype=np.uint8)
    n = len(alphabet)
    if spec.kind == "uniform":
        idx = np.floor(u * n).astype(np.int64)
    else:
        cum = np.cumsum(np.asarray(spec.weights, dtype=np.float64))
        idx = np.searchsorted(cum, u, side="right")
    return alphabet[np.minimum(idx, n - 1)]


def generate(spec: SourceSpec, length: Optional[int] = None) -> Sequence:
    """Deterministic sample of ``length`` symbols from ``spec``.

    For piecewise sources ``length`` may be omitted; if given it must equal
    the sum of the piece lengths.
    """
    if spec.kind == "piecewise":
        total = spec.total_length
        if length is not None and length != total:
            raise ValueError(f"piece lengths sum to {total}, requested {length}")
        u = unit_floats(spec.seed, total)
        out, pos = [], 0
        for n, sub in spec.pieces:
            out.append(_draw(sub, u[pos:pos + n]))
            pos += n
        return Sequence(np.concatenate(out).tobytes() if out else b"")
    if length is None or length < 0:
        raise ValueError("length must be given and >= 0")
    return Sequence(_draw(spec, unit_floats(spec.seed, length)).tobytes())


# -- text format ------------------------------------------------------------

_HEX_RANGE = re.compile(r"^0x([0-9a-fA-F]{1,2})-0x([0-9a-fA-F]{1,2})$")
_HEX_LIST = re.compile(r"^0x[0-9a-fA-F]{1,2}(,0x[0-9a-fA-F]{1,2})*$")


def parse_alphabet(text: str) -> bytes:
    text = text.strip()
    m = _HEX_RANGE.match(text)
    if m:
        lo, hi = int(m.group(1), 16), int(m.group(2), 16)
        if lo > hi:
            raise ValueError(f"empty alphabet range {text!r}")
        return bytes(range(lo, hi + 1))
    if _HEX_LIST.match(text.replace(" ", "")):
        return bytes(int(t, 16) for t in text.replace(" ", "").split(","))
    return text.encode("latin-1")


def _weights(text: str) -> tuple:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _leaf(kind: str, alphabet: str, weights: Optional[str], seed: int) -> SourceSpec:
    if kind == "piecewise":
        raise ValueError("pieces cannot themselves be piecewise")
    return SourceSpec(kind, parse_alphabet(alphabet),
                      _weights(weights) if weights else (), seed=seed)


def parse_sources(text: str) -> dict:
    """Read the INI source format into ``{name: (SourceSpec, length)}``."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp.read_string(text)
    out = {}
    for name in cp.sections():
        sec = cp[name]
        try:
            kind = sec.get("kind", "").strip()
            seed = int(sec.get("seed", "0"), 0)
            if kind == "piecewise":
                keys = sorted((k for k in sec if re.fullmatch(r"piece\d+", k)),
                              key=lambda k: int(k[5:]))
                pieces = []
                for k in keys:
                    fields = sec[k].split()
                    if len(fields) not in (3, 4):
                        raise ValueError(f"{k}: expected 'length kind alphabet [weights]'")
                    pieces.append((int(fields[0]),
                                   _leaf(fields[1], fields[2], fields[3] if len(fields) == 4 else None, seed)))
                spec = piecewise(pieces, seed)
                length = spec.total_length
                if "length" in sec and int(sec["length"]) != length:
                    raise ValueError(f"length {sec['length']} != sum of pieces {length}")
            else:
                if "length" not in sec:
                    raise ValueError("length is required")
                spec = _leaf(kind, sec.get("alphabet", ""), sec.get("weights"), seed)
                length = int(sec["length"])
        except ValueError as e:
            raise ValueError(f"source [{name}]: {e}") from None
        out[name] = (spec, length)
    return out
