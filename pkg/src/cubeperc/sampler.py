"""Reproducible Bernoulli edge sampling.

Every coin flip is a pure function of (seed, trial, round, counter), so
samples are random-access, trivially parallel across trials, and
bit-identical on every platform.  The construction is frozen:

    mix64(x):                      # splitmix64 finalizer (Stafford mix 13)
        x ^= x >> 30;  x *= 0xBF58476D1CE4E5B9   (mod 2^64)
        x ^= x >> 27;  x *= 0x94D049BB133111EB   (mod 2^64)
        x ^= x >> 31
        return x

    state(seed, trial, round):
        k = mix64(seed XOR 0x9E3779B97F4A7C15)
        k = mix64(k XOR (trial * 0xBF58476D1CE4E5B9 mod 2^64))
        k = mix64(k XOR (round * 0x94D049BB133111EB mod 2^64))
        return k

    bits(key, counter)   = mix64(state + counter * 0x9E3779B97F4A7C15 mod 2^64)
    uniform01(key, counter) = (bits >> 11) / 2^53

The top 53 bits are used so the result is exactly representable and lies in
[0, 1); an edge e is open iff uniform01(key, e) < p.  For a fixed key the
output is splitmix64 seeded at ``state``, i.e. a bijection of the counter.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

_M64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

_TO_UNIT = 2.0**-53


def _mix64(x: int) -> int:
    x &= _M64
    x ^= x >> 30
    x = (x * _MIX_A) & _M64
    x ^= x >> 27
    x = (x * _MIX_B) & _M64
    x ^= x >> 31
    return x


def _mix64_np(x: np.ndarray) -> np.ndarray:
    # same finalizer over uint64 arrays; numpy multiplication wraps mod 2^64
    x = x ^ (x >> np.uint64(30))
    x = x * np.uint64(_MIX_A)
    x = x ^ (x >> np.uint64(27))
    x = x * np.uint64(_MIX_B)
    x = x ^ (x >> np.uint64(31))
    return x


@dataclass(frozen=True)
class SampleKey:
    """Stream identity: distinct (seed, trial, round) give independent streams.

    round 0 tags single-round draws; rounds 1 and 2 tag the two sprinkling
    exposures.
    """

    seed: int
    trial: int = 0
    round: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < (1 << 64):
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if not 0 <= self.trial < (1 << 32):
            raise ValueError(f"trial must fit in 32 unsigned bits, got {self.trial}")
        if not 0 <= self.round < (1 << 32):
            raise ValueError(f"round must be a small nonnegative tag, got {self.round}")


def _stream_state(key: SampleKey) -> int:
    k = _mix64(key.seed ^ _GAMMA)
    k = _mix64(k ^ ((key.trial * _MIX_A) & _M64))
    k = _mix64(k ^ ((key.round * _MIX_B) & _M64))
    return k


def uniform01(key: SampleKey, counter: int) -> float:
    """The keyed uniform in [0, 1): deterministic in (key, counter)."""
    bits = _mix64((_stream_state(key) + counter * _GAMMA) & _M64)
    return (bits >> 11) * _TO_UNIT


def uniform01_array(key: SampleKey, counters: np.ndarray) -> np.ndarray:
    """Vectorized uniform01 over an array of counters (bit-identical to scalar)."""
    state = np.uint64(_stream_state(key))
    x = state + counters.astype(np.uint64) * np.uint64(_GAMMA)
    bits = _mix64_np(x)
    return (bits >> np.uint64(11)).astype(np.float64) * _TO_UNIT


@dataclass(frozen=True)
class EdgeSample:
    """The open-edge set of one percolation draw over Q^d.

    ``open_mask[e]`` is True iff uniform01(key, e) < p.  ``key`` is None for
    derived sets (unions), whose membership is no longer a single-key
    function; ``p`` then holds the effective per-edge open probability.
    """

    d: int
    p: float
    open_mask: np.ndarray
    key: SampleKey | None = None

    def __post_init__(self):
        self.open_mask.setflags(write=False)

    @property
    def open_count(self) -> int:
        return int(self.open_mask.sum())

    def is_open(self, edge_index: int) -> bool:
        return bool(self.open_mask[edge_index])

    def open_edges(self) -> np.ndarray:
        return np.flatnonzero(self.open_mask)


def sample_edges(g, key: SampleKey, p: float) -> EdgeSample:
    """Draw Q^d_p: edge e is open iff uniform01(key, e) < p.

    Implemented as one vectorized per-edge test over all m counters; this is
    the contract itself, not an approximation of it.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    counters = np.arange(g.m, dtype=np.uint64)
    mask = uniform01_array(key, counters) < p
    return EdgeSample(d=g.d, p=float(p), open_mask=mask, key=key)


@dataclass(frozen=True)
class SprinklingSplit:
    """Two-round decomposition with (1-p1)(1-p2) = 1-p."""

    p: float
    p1: float
    p2: float


def split_probability(p: float, p2: float) -> SprinklingSplit:
    """Solve 1-p = (1-p1)(1-p2) for the first-round probability p1."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"total probability must lie in [0, 1], got {p}")
    if not 0.0 <= p2 < 1.0:
        raise ValueError(f"second-round probability must lie in [0, 1), got {p2}")
    if p2 > p:
        raise ValueError(f"second-round probability {p2} exceeds total {p}")
    # degenerate split is the exact identity, not 1 - (1 - p)
    p1 = p if p2 == 0.0 else 1.0 - (1.0 - p) / (1.0 - p2)
    return SprinklingSplit(p=float(p), p1=float(p1), p2=float(p2))


def union_samples(a: EdgeSample, b: EdgeSample) -> EdgeSample:
    """Union of two draws; per-edge open probability 1-(1-p_a)(1-p_b).

    With independent rounds at the split probabilities this is distributed
    exactly as a single draw at p.
    """
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} vs {b.d}")
    p = 1.0 - (1.0 - a.p) * (1.0 - b.p)
    return EdgeSample(d=a.d, p=p, open_mask=a.open_mask | b.open_mask, key=None)


class BitStream:
    """Sequential Bernoulli(p) bit source: bit i is uniform01(key, i) < p.

    Consumed bits are recorded, so the stream can report how many bits were
    used and the maximum number of ones over every contiguous window of a
    requested length (the interval statistic of the subcritical argument).
    """

    def __init__(self, key: SampleKey, p: float, block: int = 8192):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"bit probability must lie in [0, 1], got {p}")
        self.key = key
        self.p = float(p)
        self._block = int(block)
        self._state = np.uint64(_stream_state(key))
        self._chunks: list[np.ndarray] = []
        self._buf: np.ndarray | None = None
        self._pos = 0
        self.consumed = 0

    def _refill(self) -> None:
        start = len(self._chunks) * self._block
        counters = np.arange(start, start + self._block, dtype=np.uint64)
        x = self._state + counters * np.uint64(_GAMMA)
        u = (_mix64_np(x) >> np.uint64(11)).astype(np.float64) * _TO_UNIT
        self._buf = (u < self.p).astype(np.uint8)
        self._chunks.append(self._buf)
        self._pos = 0

    def next_bit(self) -> int:
        if self._buf is None or self._pos >= self._block:
            self._refill()
        bit = self._buf[self._pos]
        self._pos += 1
        self.consumed += 1
        return int(bit)

    def query(self, edge_index: int | None = None) -> int:
        # sequential source: the edge identity is irrelevant, order is all
        return self.next_bit()

    def _consumed_bits(self) -> np.ndarray:
        if not self._chunks:
            return np.empty(0, dtype=np.uint8)
        bits = np.concatenate(self._chunks)
        return bits[: self.consumed]

    def ones_count(self) -> int:
        return int(self._consumed_bits().sum())

    def max_ones_in_window(self, length: int) -> int:
        """Max number of ones over all length-``length`` windows consumed so far."""
        if length < 1:
            raise ValueError(f"window length must be positive, got {length}")
        bits = self._consumed_bits()
        if bits.size == 0:
            return 0
        if length >= bits.size:
            return int(bits.sum())
        cs = np.cumsum(bits, dtype=np.int64)
        windows = cs[length - 1 :].copy()
        windows[1:] -= cs[: -length]
        return int(windows.max())


class EdgeKeyedBitSource:
    """Bit source keyed by edge index: answers exactly as sample_edges would.

    Adapter for cross-checking exploration against full labeling under the
    same per-edge randomness.
    """

    def __init__(self, key: SampleKey, p: float):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"bit probability must lie in [0, 1], got {p}")
        self.key = key
        self.p = float(p)
        self._state = _stream_state(key)
        self.consumed = 0

    def query(self, edge_index: int) -> int:
        self.consumed += 1
        bits = _mix64((self._state + edge_index * _GAMMA) & _M64)
        return int((bits >> 11) * _TO_UNIT < self.p)


_DUMP_HEADER = struct.Struct("<IQIId")  # d, seed, trial, round, p


def write_sample(sample: EdgeSample, path) -> None:
    """Binary dump: header (d, seed, trial, round, p) then a packed bitmap of
    m bits, little-endian bit order by edge index."""
    if sample.key is None:
        raise ValueError("only single-key samples can be dumped (union sets carry no key)")
    header = _DUMP_HEADER.pack(
        sample.d, sample.key.seed, sample.key.trial, sample.key.round, sample.p
    )
    packed = np.packbits(sample.open_mask.view(np.uint8), bitorder="little")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(packed.tobytes())


def read_sample(path) -> EdgeSample:
    """Inverse of write_sample."""
    with open(path, "rb") as fh:
        raw = fh.read()
    d, seed, trial, round_, p = _DUMP_HEADER.unpack_from(raw, 0)
    m = d << (d - 1)
    packed = np.frombuffer(raw, dtype=np.uint8, offset=_DUMP_HEADER.size)
    mask = np.unpackbits(packed, count=m, bitorder="little").astype(bool)
    return EdgeSample(d=d, p=p, open_mask=mask, key=SampleKey(seed, trial, round_))
