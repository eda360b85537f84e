"""
Keyed counter-based random streams.

Encoder and decoder must draw bit-identical noise, so every random draw in the
codec comes from an RngStream whose output is a pure function of its key and
its counter. The generator is numpy's Philox-4x64-10:

    key     = (seed, domain_tag)
    counter = (block + 1, 0, iteration, sample)

Word j of a stream is word (j mod 4) of the Philox block for block = j // 4.
Because the position is part of the counter, streams can be evaluated in any
order and from any thread without changing a single bit. The full layout is
normative and documented in docs/FORMAT.md.
"""

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from src.utils.errors import ConfigInvalid

WORDS_PER_BLOCK = 4
_U53 = 2.0 ** -53
_MASK64 = (1 << 64) - 1
_MASK32 = (1 << 32) - 1


class DomainTag(IntEnum):
    """Purpose codes that separate the draws feeding each codec step."""
    INIT = 1      # reserved for sampler initialisation outside a batch
    SELECT = 2    # posterior samples used for row selection
    RESTORE = 3   # posterior samples used for final restoration
    SOURCE = 4    # synthetic signals and random baselines (never in the bitstream path)


@dataclass
class RngStream:
    """
    A keyed random stream.

    Attributes:
        seed: 64-bit seed shared by encoder and decoder.
        domain_tag: purpose code (DomainTag).
        iteration: 32-bit codec iteration index.
        sample: 32-bit sample index inside a batch.
        counter: number of 64-bit words consumed so far.
    """
    seed: int
    domain_tag: int
    iteration: int
    sample: int
    counter: int = 0

    @property
    def key(self) -> tuple:
        return (self.seed, int(self.domain_tag), self.iteration, self.sample)

    def fork(self) -> 'RngStream':
        """Return an independent copy positioned at the same counter."""
        return RngStream(self.seed, self.domain_tag, self.iteration, self.sample, self.counter)

    def words(self, n: int) -> np.ndarray:
        """Return the next n raw 64-bit words and advance the counter by n."""
        out = peek_words(self, self.counter, n)
        self.counter += n
        return out


def derive_stream(seed: int, domain_tag: int, iteration: int, sample: int) -> RngStream:
    """
    Derive the stream for one (seed, purpose, iteration, sample) tuple.

    Distinct tuples map to distinct Philox (key, counter) lanes.
    """
    if not 0 <= seed <= _MASK64:
        raise ConfigInvalid(f"seed must fit in 64 bits, got {seed}")
    if not 0 <= int(domain_tag) <= 0xFF:
        raise ConfigInvalid(f"domain tag must fit in 8 bits, got {domain_tag}")
    if not 0 <= iteration <= _MASK32 or not 0 <= sample <= _MASK32:
        raise ConfigInvalid(f"iteration/sample must fit in 32 bits, got {iteration}/{sample}")
    return RngStream(seed=int(seed), domain_tag=int(domain_tag),
                     iteration=int(iteration), sample=int(sample))


def peek_words(stream: RngStream, start: int, n: int) -> np.ndarray:
    """Words [start, start + n) of the stream, without touching its counter."""
    if n <= 0:
        return np.empty(0, dtype=np.uint64)
    block, offset = divmod(start, WORDS_PER_BLOCK)
    # numpy increments the counter before generating each block
    bit_generator = np.random.Philox(
        counter=np.array([block, 0, stream.iteration, stream.sample], dtype=np.uint64),
        key=np.array([stream.seed, stream.domain_tag], dtype=np.uint64),
    )
    raw = bit_generator.random_raw(offset + n)
    return np.asarray(raw[offset:], dtype=np.uint64)


def gauss(stream: RngStream, n: int) -> np.ndarray:
    """
    Draw n standard normals with Box-Muller.

    Each pair of normals consumes exactly two words (w0, w1):
        u1 = ((w0 >> 11) + 1) * 2^-53   in (0, 1]
        u2 = (w1 >> 11) * 2^-53         in [0, 1)
        z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2)
    Outputs are emitted z0, z1, z0, z1, ...; an odd n discards the last z1,
    so the counter always advances by 2 * ceil(n / 2).
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        return np.empty(0, dtype=np.float64)
    pairs = (n + 1) // 2
    w = stream.words(2 * pairs)
    u1 = ((w[0::2] >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * _U53
    u2 = (w[1::2] >> np.uint64(11)).astype(np.float64) * _U53
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * math.pi * u2
    out = np.empty(2 * pairs, dtype=np.float64)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:n]


def uniform(stream: RngStream, n: int) -> np.ndarray:
    """Draw n uniforms in [0, 1), one word each (top 53 bits)."""
    if n <= 0:
        return np.empty(0, dtype=np.float64)
    w = stream.words(n)
    return (w >> np.uint64(11)).astype(np.float64) * _U53
