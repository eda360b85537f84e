"""
Measurement record: the transmitted codes, and the values both sides
condition on.
"""

from typing import Iterable

import numpy as np

from src.quant import dequantize_array, quantize_array


class MeasurementRecord:
    """
    Measurements accumulated over the codec loop.

    In the quantized (normal) mode the codes are the single source of truth
    and `values` is always dequantize(codes). The unquantized mode is a test
    hook that keeps raw measurements and has no codes.
    """

    def __init__(self, quantized: bool = True):
        self.quantized = quantized
        self.codes = bytearray()
        self._raw: list = []

    def __len__(self) -> int:
        return len(self.codes) if self.quantized else len(self._raw)

    def add_measurements(self, raw: np.ndarray) -> np.ndarray:
        """Quantize (or keep) fresh measurements; returns the codes added."""
        raw = np.asarray(raw, dtype=np.float64).reshape(-1)
        if not self.quantized:
            self._raw.extend(float(v) for v in raw)
            return np.empty(0, dtype=np.uint8)
        codes = quantize_array(raw)
        self.codes.extend(codes.tobytes())
        return codes

    def add_codes(self, codes: Iterable[int]) -> None:
        self.codes.extend(bytes(codes))

    @property
    def values(self) -> np.ndarray:
        """Dequantized measurements (still carrying the prescale factor)."""
        if not self.quantized:
            return np.array(self._raw, dtype=np.float64)
        return dequantize_array(np.frombuffer(bytes(self.codes), dtype=np.uint8))
