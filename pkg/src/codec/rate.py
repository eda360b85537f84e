"""
Rate accounting.

BPP counts header and payload bytes. The pixel count is the product of the
signal dimensions, except that a 3-D shape is read as (channels, height,
width) and its channel axis is excluded.
"""

import math
from typing import Sequence, Union

from src.codec.bitstream import Bitstream
from src.utils.errors import ConfigInvalid


def pixel_count(shape: Sequence[int]) -> int:
    shape = tuple(int(d) for d in shape)
    if len(shape) == 3:
        return shape[1] * shape[2]
    return math.prod(shape)


def bits_per_pixel(total_bytes: int, shape: Sequence[int]) -> float:
    return total_bytes * 8 / pixel_count(shape)


def measure_bpp(stream: Union[Bitstream, bytes]) -> float:
    """(header + payload bytes) * 8 / pixels of the encoded shape."""
    if not isinstance(stream, Bitstream):
        stream = Bitstream.from_bytes(stream)
    return bits_per_pixel(len(stream), stream.header.shape)


def iterations_for_bpp(target_bpp: float, shape: Sequence[int], r: int) -> int:
    """
    N = ⌊target_bits / (8r)⌋, measured before entropy coding and clamped to D / r.
    """
    if target_bpp < 0 or not math.isfinite(target_bpp):
        raise ConfigInvalid(f"target BPP must be a non-negative number, got {target_bpp}")
    if r < 1:
        raise ConfigInvalid(f"r must be at least 1, got {r}")
    target_bits = target_bpp * pixel_count(shape)
    return min(int(target_bits // (8 * r)), math.prod(shape) // r)
