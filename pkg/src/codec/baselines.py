"""
Fixed-transform baselines.

A fixed transform is shared ahead of time instead of being rebuilt per
signal. Baselines go through the same quantizer, range coder and
restoration modes as PSC so that sweeps compare transforms only.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from src.codec.config import PscConfig
from src.codec.restore import DEFAULT_AVERAGE, restore
from src.determinism import DomainTag, derive_stream, gauss
from src.entropy import range_encode
from src.linalg import empty_rows, orthonormalize_against, sym_eig_desc
from src.priors.interface import PriorModel
from src.quant import dequantize_array, quantize_array
from src.utils.errors import ConfigInvalid

# SOURCE stream keys: (iteration, sample)
RANDOM_TRANSFORM_KEY = (0, 1)
SIGNAL_KEY = (1, 0)

TransformFactory = Callable[[PriorModel, int, int], np.ndarray]

_TRANSFORMS: Dict[str, TransformFactory] = {}


def register_transform(name: str):
    def decorator(func: TransformFactory) -> TransformFactory:
        _TRANSFORMS[name] = func
        return func
    return decorator


def baseline_names() -> List[str]:
    return sorted(_TRANSFORMS)


def klt_rows(prior: PriorModel, k: int) -> np.ndarray:
    """Leading k eigenvectors of the prior covariance (mixture covariance for a GMM)."""
    _, vectors = sym_eig_desc(prior.moments()[1])
    return vectors[:k].copy()


def random_orthonormal_rows(dim: int, k: int, seed: int) -> np.ndarray:
    """k seeded Gaussian directions, orthonormalized in draw order."""
    if k > dim:
        raise ConfigInvalid(f"cannot draw {k} orthonormal rows in dimension {dim}")
    if k == 0:
        return empty_rows(dim)
    stream = derive_stream(seed, DomainTag.SOURCE, *RANDOM_TRANSFORM_KEY)
    return orthonormalize_against(gauss(stream, k * dim).reshape(k, dim), empty_rows(dim))


@register_transform('klt')
def _klt(prior: PriorModel, k: int, seed: int) -> np.ndarray:
    return klt_rows(prior, k)


@register_transform('random')
def _random(prior: PriorModel, k: int, seed: int) -> np.ndarray:
    return random_orthonormal_rows(prior.dim, k, seed)


def baseline_rows(name: str, prior: PriorModel, k: int, seed: int = 0) -> np.ndarray:
    try:
        factory = _TRANSFORMS[name]
    except KeyError:
        raise ConfigInvalid(f"unknown baseline transform {name!r}; use one of {baseline_names()}") from None
    return factory(prior, k, seed)


@dataclass
class BaselineResult:
    """Reconstruction through a fixed transform and the coded size of its measurements."""
    signal: np.ndarray
    rows: np.ndarray
    codes: bytes
    payload_bytes: int


def fixed_transform_code(x: np.ndarray, rows: np.ndarray, prior: PriorModel, cfg: PscConfig,
                         mode: str = 'pinv', n_avg: int = DEFAULT_AVERAGE) -> BaselineResult:
    """
    Measure x through `rows`, quantize and range-code the measurements, and
    restore from the dequantized values with the given restoration mode.
    """
    flat = np.asarray(x, dtype=np.float64).reshape(-1)
    codes = quantize_array(cfg.prescale * (rows @ flat)).tobytes()
    payload = range_encode(codes)
    y_deq = dequantize_array(np.frombuffer(codes, dtype=np.uint8))
    signal = restore(mode, rows, y_deq, prior, cfg, n_avg).reshape(np.shape(x))
    return BaselineResult(signal, rows, codes, len(payload))


def draw_source_signals(prior: PriorModel, count: int, seed: int) -> np.ndarray:
    """`count` synthetic signals from the prior, one per row."""
    return prior.draw(derive_stream(seed, DomainTag.SOURCE, *SIGNAL_KEY), count)
