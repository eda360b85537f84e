# PSC codec package
from src.codec.baselines import (
    BaselineResult,
    baseline_names,
    baseline_rows,
    draw_source_signals,
    fixed_transform_code,
    klt_rows,
    random_orthonormal_rows,
)
from src.codec.bitstream import Bitstream, StreamHeader, unpack_header
from src.codec.config import PscConfig
from src.codec.pipeline import (
    DecodeResult,
    EncodeResult,
    config_from_header,
    decode_progressive,
    psc_decode,
    psc_encode,
)
from src.codec.rate import bits_per_pixel, iterations_for_bpp, measure_bpp, pixel_count
from src.codec.record import MeasurementRecord
from src.codec.restore import (
    DEFAULT_AVERAGE,
    restoration_modes,
    restore,
    restore_pinv,
    restore_posterior_mean,
    restore_posterior_sample,
)
from src.codec.session import CodecSession, transform_digest

__all__ = [
    'BaselineResult',
    'Bitstream',
    'CodecSession',
    'DEFAULT_AVERAGE',
    'DecodeResult',
    'EncodeResult',
    'MeasurementRecord',
    'PscConfig',
    'StreamHeader',
    'baseline_names',
    'baseline_rows',
    'bits_per_pixel',
    'config_from_header',
    'decode_progressive',
    'draw_source_signals',
    'fixed_transform_code',
    'iterations_for_bpp',
    'klt_rows',
    'measure_bpp',
    'pixel_count',
    'psc_decode',
    'psc_encode',
    'random_orthonormal_rows',
    'restoration_modes',
    'restore',
    'restore_pinv',
    'restore_posterior_mean',
    'restore_posterior_sample',
    'transform_digest',
    'unpack_header',
]
