# Entropy coding package
from src.entropy.range_coder import (
    RangeDecoder,
    RangeEncoder,
    SymbolModel,
    range_decode,
    range_encode,
)

# wire codes recorded in the bitstream header
ENTROPY_CODERS = {'range-o0': 0}

__all__ = [
    'ENTROPY_CODERS',
    'RangeDecoder',
    'RangeEncoder',
    'SymbolModel',
    'range_decode',
    'range_encode',
]
