# Determinism package: keyed counter-based random streams
from src.determinism.rng import (
    DomainTag,
    RngStream,
    derive_stream,
    gauss,
    peek_words,
    uniform,
)

__all__ = [
    'DomainTag',
    'RngStream',
    'derive_stream',
    'gauss',
    'peek_words',
    'uniform',
]
