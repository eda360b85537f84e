"""
Tests for the adaptive order-0 range coder.
"""

import numpy as np
import pytest

from src.entropy import ENTROPY_CODERS, RangeDecoder, RangeEncoder, SymbolModel, range_decode, range_encode
from src.entropy.range_coder import FLUSH_BYTES, RESCALE_LIMIT
from src.utils.errors import CorruptStream


def random_bytes(n, seed=0):
    return np.random.default_rng(seed).integers(0, 256, n, dtype=np.uint8).tobytes()


@pytest.fixture(scope='module')
def uniform_case():
    symbols = random_bytes(100_000)
    return symbols, range_encode(symbols)


class TestSymbolModel:
    """Adaptive frequency model."""

    def test_initial_state(self):
        """All counts start at one."""
        model = SymbolModel()
        assert model.total == 256
        assert model.interval(0) == (0, 1)
        assert model.interval(200) == (200, 1)

    def test_update_and_locate(self):
        """Coding a symbol adds 32 to its count; locate inverts interval."""
        model = SymbolModel()
        model.update(5)
        assert model.interval(5) == (5, 33)
        assert model.total == 288
        for target in (0, 5, 37, 38, 287):
            symbol, cum, freq = model.locate(target)
            assert cum <= target < cum + freq
            assert model.interval(symbol) == (cum, freq)

    def test_rescale(self):
        """Counts halve (minimum one) when the total reaches 2^16."""
        model = SymbolModel()
        while model.total < RESCALE_LIMIT - 32:
            model.update(7)
        before = model.counts.copy()
        model.update(7)
        assert model.total < RESCALE_LIMIT
        assert model.counts[0] == 1
        assert model.counts[7] == (before[7] + 32) // 2

    def test_encoder_and_decoder_models_agree(self):
        """After a stream that rescales several times both sides hold the same counts."""
        symbols = random_bytes(5000, seed=11)
        encoder = RangeEncoder()
        for s in symbols:
            encoder.encode(s)
        decoder = RangeDecoder(encoder.finish())
        for _ in symbols:
            decoder.decode()
        assert decoder.model.total == encoder.model.total == int(encoder.model.counts.sum())
        assert np.array_equal(decoder.model.counts, encoder.model.counts)


class TestRoundTrip:
    """Lossless coding."""

    def test_uniform_round_trip(self, uniform_case):
        """10^5 uniform bytes decode back exactly."""
        symbols, payload = uniform_case
        assert range_decode(payload, len(symbols)) == symbols

    def test_uniform_rate(self, uniform_case):
        """Uniform bytes cost at most 8.1 bits per symbol."""
        symbols, payload = uniform_case
        assert 8.0 * len(payload) / len(symbols) <= 8.1

    def test_constant_stream(self):
        """1000 copies of 0x38 fit in 150 bytes."""
        payload = range_encode(bytes([0x38]) * 1000)
        assert len(payload) <= 150
        assert range_decode(payload, 1000) == bytes([0x38]) * 1000

    def test_skewed_stream(self):
        """A skewed source codes well below 8 bits per symbol."""
        rng = np.random.default_rng(1)
        symbols = rng.choice([0x38, 0x40, 0xB8], size=20_000, p=[0.8, 0.15, 0.05]).astype(np.uint8).tobytes()
        payload = range_encode(symbols)
        assert range_decode(payload, len(symbols)) == symbols
        assert 8.0 * len(payload) / len(symbols) < 1.2

    def test_empty(self):
        """No symbols: only the flush bytes."""
        payload = range_encode(b'')
        assert payload == bytes(FLUSH_BYTES)
        assert range_decode(payload, 0) == b''

    def test_deterministic(self):
        """The same input always gives the same payload."""
        symbols = random_bytes(3000, seed=2)
        assert range_encode(symbols) == range_encode(symbols)

    def test_carry_heavy_stream(self):
        """Long runs of the most likely symbol followed by 0xFF stress carry propagation."""
        symbols = (bytes([0xFF]) * 300 + bytes([0x00, 0xFF]) * 50) * 10
        assert range_decode(range_encode(symbols), len(symbols)) == symbols


class TestPrefixDecode:
    """Decoding the first n symbols only."""

    def test_half_prefix(self, uniform_case):
        """Decoding n/2 symbols gives the first half of the full decode."""
        symbols, payload = uniform_case
        half = len(symbols) // 2
        assert range_decode(payload, half) == symbols[:half]

    def test_incremental_decoder(self):
        """Symbols can be pulled one at a time."""
        symbols = random_bytes(500, seed=3)
        encoder = RangeEncoder()
        for s in symbols:
            encoder.encode(s)
        decoder = RangeDecoder(encoder.finish())
        assert bytes(decoder.decode() for _ in range(len(symbols))) == symbols


class TestCorruption:
    """Malformed payloads."""

    def test_truncated_payload(self, uniform_case):
        """A payload cut in half runs out of bytes."""
        symbols, payload = uniform_case
        with pytest.raises(CorruptStream):
            range_decode(payload[:len(payload) // 2], len(symbols))

    def test_too_short_to_start(self):
        """The decoder needs four bytes to initialise."""
        with pytest.raises(CorruptStream):
            range_decode(b'\x00\x01', 1)

    def test_negative_count(self):
        """A negative symbol count is a programming error."""
        with pytest.raises(ValueError):
            range_decode(bytes(8), -1)

    def test_symbol_out_of_range(self):
        """Only bytes can be encoded."""
        with pytest.raises(ValueError):
            RangeEncoder().encode(256)


def test_wire_code():
    """The range coder is entropy coder 0 on the wire."""
    assert ENTROPY_CODERS == {'range-o0': 0}


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
