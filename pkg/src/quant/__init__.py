# Measurement quantizers
from src.quant.e4m3 import (
    MAX_FINITE,
    canonical_codes,
    dequantize_array,
    dequantize_e4m3,
    is_valid_code,
    quantize_array,
    quantize_e4m3,
)

# wire codes recorded in the bitstream header
QUANTIZERS = {'e4m3': 0}

__all__ = [
    'MAX_FINITE',
    'QUANTIZERS',
    'canonical_codes',
    'dequantize_array',
    'dequantize_e4m3',
    'is_valid_code',
    'quantize_array',
    'quantize_e4m3',
]
