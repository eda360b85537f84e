"""
PSC bitstream container: a fixed-layout little-endian header followed by
the range-coded payload. The layout is normative (docs/FORMAT.md).

    magic           4s   b"PSC1"
    version         u8
    ndim            u8
    dims            u32 x ndim
    N, r, s         u32 x 3
    sampler_id      u8
    selection_mode  u8
    eta, eta_b      f64 x 2
    T               u32
    seed            u64
    quantizer_id    u8
    entropy_id      u8
    prescale        f64
    prior_digest    u64
    symbol_count    u32   (== N·r)
    payload_length  u32
    payload_crc32   u32
    header_crc32    u32   (over every preceding header byte)
"""

import struct
import zlib
from dataclasses import dataclass
from typing import Tuple

from src.utils.errors import ChecksumMismatch, CorruptStream

MAGIC = b'PSC1'
VERSION = 1

_PREFIX = struct.Struct('<4sBB')
_BODY = struct.Struct('<IIIBBddIQBBdQIII')
_CRC = struct.Struct('<I')


@dataclass(frozen=True)
class StreamHeader:
    """Decoded header fields; ids are wire codes."""
    shape: Tuple[int, ...]
    n_iter: int
    r: int
    s: int
    sampler_code: int
    selection_code: int
    eta: float
    eta_b: float
    steps: int
    seed: int
    quantizer_code: int
    entropy_code: int
    prescale: float
    prior_digest: int
    symbol_count: int
    payload_length: int = 0
    payload_crc: int = 0
    version: int = VERSION

    def pack(self) -> bytes:
        """Header bytes including the trailing header CRC."""
        body = (
            _PREFIX.pack(MAGIC, self.version, len(self.shape))
            + struct.pack(f'<{len(self.shape)}I', *self.shape)
            + _BODY.pack(self.n_iter, self.r, self.s, self.sampler_code, self.selection_code,
                         self.eta, self.eta_b, self.steps, self.seed, self.quantizer_code,
                         self.entropy_code, self.prescale, self.prior_digest, self.symbol_count,
                         self.payload_length, self.payload_crc)
        )
        return body + _CRC.pack(zlib.crc32(body))

    @property
    def size(self) -> int:
        return _PREFIX.size + 4 * len(self.shape) + _BODY.size + _CRC.size


def _take(data: bytes, offset: int, size: int) -> bytes:
    if offset + size > len(data):
        raise CorruptStream(f"stream truncated inside the header ({len(data)} bytes)")
    return data[offset:offset + size]


def unpack_header(data: bytes) -> Tuple[StreamHeader, int]:
    """
    Parse and verify a header.

    Returns:
        (header, header size in bytes).

    Raises:
        CorruptStream: bad magic, unsupported version or truncation.
        ChecksumMismatch: header CRC does not validate.
    """
    magic, version, ndim = _PREFIX.unpack(_take(data, 0, _PREFIX.size))
    if magic != MAGIC:
        raise CorruptStream(f"not a PSC stream (magic {magic!r})")
    if version != VERSION:
        raise CorruptStream(f"unsupported stream version {version}")
    offset = _PREFIX.size
    shape = struct.unpack(f'<{ndim}I', _take(data, offset, 4 * ndim))
    offset += 4 * ndim
    fields = _BODY.unpack(_take(data, offset, _BODY.size))
    offset += _BODY.size
    (stored_crc,) = _CRC.unpack(_take(data, offset, _CRC.size))
    if zlib.crc32(data[:offset]) != stored_crc:
        raise ChecksumMismatch("header checksum does not validate")
    header = StreamHeader(tuple(shape), *fields, version=version)
    return header, offset + _CRC.size


@dataclass(frozen=True)
class Bitstream:
    """Header plus payload; the compressed representation of one signal."""
    header: StreamHeader
    payload: bytes

    def to_bytes(self) -> bytes:
        return self.header.pack() + self.payload

    def __len__(self) -> int:
        return self.header.size + len(self.payload)

    @classmethod
    def from_bytes(cls, data: bytes) -> 'Bitstream':
        """
        Parse a serialized stream, verifying both checksums.

        Raises:
            CorruptStream: malformed header or payload length mismatch.
            ChecksumMismatch: header or payload CRC does not validate.
        """
        data = bytes(data)
        header, size = unpack_header(data)
        payload = data[size:]
        if len(payload) != header.payload_length:
            raise CorruptStream(f"payload is {len(payload)} bytes, header says {header.payload_length}")
        if zlib.crc32(payload) != header.payload_crc:
            raise ChecksumMismatch("payload checksum does not validate")
        return cls(header, payload)
