"""
Adaptive order-0 range coder for byte symbols.

Model: 256 counts starting at 1; each coded symbol adds 32 to its count;
when the total reaches 2^16 every count is halved (floor, minimum 1).

Coder: 32-bit range, byte-wise renormalisation while range < 2^24. `low`
may overflow 32 bits after an interval update; the carry is propagated into
bytes already emitted. The stream ends with the 4 bytes of `low` followed by
4 zero bytes. Bytes are big-endian within `low`.
"""

from typing import Iterable, List, Tuple

import numpy as np

from src.utils.errors import CorruptStream

ALPHABET = 256
INCREMENT = 32
RESCALE_LIMIT = 1 << 16
TOP = 1 << 32
RENORM_BOUND = 1 << 24
FLUSH_BYTES = 8


class SymbolModel:
    """Adaptive frequency model shared, in lock step, by encoder and decoder."""

    def __init__(self):
        self.counts = np.ones(ALPHABET, dtype=np.int64)
        self.total = ALPHABET

    def interval(self, symbol: int) -> Tuple[int, int]:
        """(cumulative count below symbol, count of symbol)."""
        return int(self.counts[:symbol].sum()), int(self.counts[symbol])

    def locate(self, target: int) -> Tuple[int, int, int]:
        """Symbol whose interval contains target, with its (cum, freq)."""
        upper = np.cumsum(self.counts)
        symbol = int(np.searchsorted(upper, target, side='right'))
        freq = int(self.counts[symbol])
        return symbol, int(upper[symbol]) - freq, freq

    def update(self, symbol: int) -> None:
        self.counts[symbol] += INCREMENT
        self.total += INCREMENT
        if self.total >= RESCALE_LIMIT:
            self.counts = np.maximum(self.counts // 2, 1)
            self.total = int(self.counts.sum())


class RangeEncoder:
    """Single-owner encoder; call finish() once."""

    def __init__(self):
        self.model = SymbolModel()
        self.low = 0
        self.range = TOP - 1
        self.out = bytearray()
        self.count = 0

    def _propagate_carry(self) -> None:
        i = len(self.out) - 1
        while i >= 0 and self.out[i] == 0xFF:
            self.out[i] = 0
            i -= 1
        if i < 0:
            raise AssertionError("range coder carry ran past the first byte")
        self.out[i] += 1

    def encode(self, symbol: int) -> None:
        if not 0 <= symbol < ALPHABET:
            raise ValueError(f"symbol {symbol} outside the byte alphabet")
        cum, freq = self.model.interval(symbol)
        r = self.range // self.model.total
        self.low += r * cum
        self.range = r * freq
        if self.low >= TOP:
            self.low -= TOP
            self._propagate_carry()
        while self.range < RENORM_BOUND:
            self.out.append(self.low >> 24)
            self.low = (self.low << 8) & (TOP - 1)
            self.range <<= 8
        self.model.update(symbol)
        self.count += 1

    def finish(self) -> bytes:
        self.out.extend(self.low.to_bytes(4, 'big'))
        self.out.extend(bytes(FLUSH_BYTES - 4))
        return bytes(self.out)


class RangeDecoder:
    """Sequential decoder; symbols can be pulled one at a time."""

    def __init__(self, payload: bytes):
        self.payload = bytes(payload)
        self.pos = 0
        self.model = SymbolModel()
        self.range = TOP - 1
        self.code = 0
        for _ in range(4):
            self.code = (self.code << 8) | self._next_byte()

    def _next_byte(self) -> int:
        if self.pos >= len(self.payload):
            raise CorruptStream(f"payload exhausted after {self.pos} bytes")
        b = self.payload[self.pos]
        self.pos += 1
        return b

    def decode(self) -> int:
        r = self.range // self.model.total
        target = self.code // r
        if target >= self.model.total:
            raise CorruptStream("code value outside the model interval")
        symbol, cum, freq = self.model.locate(target)
        self.code -= r * cum
        self.range = r * freq
        while self.range < RENORM_BOUND:
            self.code = (self.code << 8) | self._next_byte()
            self.range <<= 8
        self.model.update(symbol)
        return symbol


def range_encode(symbols: Iterable[int]) -> bytes:
    """Encode a byte sequence; an empty input yields only the flush bytes."""
    encoder = RangeEncoder()
    for s in bytes(symbols):
        encoder.encode(s)
    return encoder.finish()


def range_decode(payload: bytes, n: int) -> bytes:
    """
    Decode the first n symbols.

    Raises:
        CorruptStream: interval inconsistency or payload exhausted.
    """
    if n < 0:
        raise ValueError(f"symbol count must be non-negative, got {n}")
    if n == 0:
        return b''
    decoder = RangeDecoder(payload)
    out: List[int] = [decoder.decode() for _ in range(n)]
    return bytes(out)
