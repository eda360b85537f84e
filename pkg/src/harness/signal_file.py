"""
SignalFile: the minimal binary container the CLI reads and writes.

    magic       4s    b"PSCR"
    ndim        u8
    dims        u32 x ndim
    peak_value  f32   PSNR reference
    data        f32 x prod(dims), little-endian, row-major
"""

import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from src.utils.errors import SignalFormatError

SIGNAL_MAGIC = b'PSCR'
DEFAULT_PEAK = 1.0

_PREFIX = struct.Struct('<4sB')
_PEAK = struct.Struct('<f')


@dataclass
class SignalFile:
    """A signal together with the peak value PSNR is measured against."""
    data: np.ndarray
    peak: float = DEFAULT_PEAK

    @property
    def shape(self):
        return tuple(self.data.shape)

    def to_bytes(self) -> bytes:
        data = np.asarray(self.data)
        if data.ndim < 1 or data.ndim > 255:
            raise SignalFormatError(f"signal must have 1 to 255 dimensions, got {data.ndim}")
        return (
            _PREFIX.pack(SIGNAL_MAGIC, data.ndim)
            + struct.pack(f'<{data.ndim}I', *data.shape)
            + _PEAK.pack(self.peak)
            + np.ascontiguousarray(data, dtype='<f4').tobytes()
        )

    @classmethod
    def from_bytes(cls, raw: bytes) -> 'SignalFile':
        """
        Parse a SignalFile.

        Raises:
            SignalFormatError: bad magic, truncated or oversized data, or
                non-finite samples.
        """
        if len(raw) < _PREFIX.size:
            raise SignalFormatError("file too short for a signal header")
        magic, ndim = _PREFIX.unpack_from(raw, 0)
        if magic != SIGNAL_MAGIC:
            raise SignalFormatError(f"not a signal file (magic {magic!r})")
        if ndim == 0:
            raise SignalFormatError("signal has no dimensions")
        offset = _PREFIX.size
        header_end = offset + 4 * ndim + _PEAK.size
        if len(raw) < header_end:
            raise SignalFormatError("file truncated inside the signal header")
        shape = struct.unpack_from(f'<{ndim}I', raw, offset)
        (peak,) = _PEAK.unpack_from(raw, offset + 4 * ndim)

        expected = 4 * math.prod(shape)
        if len(raw) - header_end != expected:
            raise SignalFormatError(f"signal data is {len(raw) - header_end} bytes, shape {shape} needs {expected}")
        data = np.frombuffer(raw, dtype='<f4', offset=header_end).astype(np.float64).reshape(shape)
        if not np.all(np.isfinite(data)):
            raise SignalFormatError("signal contains NaN or infinite values")
        if not (math.isfinite(peak) and peak > 0.0):
            raise SignalFormatError(f"peak value must be positive, got {peak}")
        return cls(data, float(peak))


def read_signal(path: Union[str, Path]) -> SignalFile:
    path = Path(path)
    if not path.is_file():
        raise SignalFormatError(f"signal file not found: {path}")
    return SignalFile.from_bytes(path.read_bytes())


def write_signal(path: Union[str, Path], signal: SignalFile) -> None:
    Path(path).write_bytes(signal.to_bytes())
