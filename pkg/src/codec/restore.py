"""
Restoration: turning (H, y) into a signal estimate.

    pinv     Hᵀy, the pseudo-inverse for orthonormal rows
    mean     average of n_avg posterior draws (distortion-oriented)
    sample   a single posterior draw (perception-oriented)

Posterior draws use the RESTORE domain tag, so they never reuse the noise
that drove row selection.
"""

from typing import Callable, Dict, List, Optional

import numpy as np

from src.codec.config import PscConfig
from src.determinism import DomainTag
from src.priors.interface import PriorModel
from src.sampler import bind_sampler, draw_indices
from src.utils.errors import ConfigInvalid

DEFAULT_AVERAGE = 64
RESTORE_ITERATION = 0

Restorer = Callable[[np.ndarray, np.ndarray, PriorModel, PscConfig, int], np.ndarray]

_RESTORERS: Dict[str, Restorer] = {}


def register_restorer(mode: str):
    """Decorator registering a restoration mode."""
    def decorator(func: Restorer) -> Restorer:
        _RESTORERS[mode] = func
        return func
    return decorator


def restoration_modes() -> List[str]:
    return sorted(_RESTORERS)


def restore_pinv(rows: np.ndarray, y_deq: np.ndarray, prescale: float = 1.0) -> np.ndarray:
    """Hᵀ y / prescale; a zero vector when H is empty."""
    return (np.asarray(y_deq, dtype=np.float64) @ rows) / prescale


def _posterior_draws(rows: np.ndarray, y_deq: np.ndarray, prior: PriorModel, cfg: PscConfig,
                     count: int, seed: Optional[int], sampler_id: Optional[str]) -> np.ndarray:
    draw = bind_sampler(sampler_id or cfg.sampler_id, prior, rows,
                        np.asarray(y_deq, dtype=np.float64) / cfg.prescale, cfg.sampler)
    return draw_indices(draw, range(count), cfg.seed if seed is None else seed,
                        RESTORE_ITERATION, DomainTag.RESTORE, cfg.threads)


def restore_posterior_mean(rows: np.ndarray, y_deq: np.ndarray, prior: PriorModel, cfg: PscConfig,
                           n_avg: int = DEFAULT_AVERAGE, seed: Optional[int] = None,
                           sampler_id: Optional[str] = None) -> np.ndarray:
    """Average of n_avg posterior draws, summed in index order."""
    if n_avg < 1:
        raise ConfigInvalid(f"n_avg must be at least 1, got {n_avg}")
    draws = _posterior_draws(rows, y_deq, prior, cfg, n_avg, seed, sampler_id)
    total = np.zeros(draws.shape[1])
    for d in draws:
        total = total + d
    return total / n_avg


def restore_posterior_sample(rows: np.ndarray, y_deq: np.ndarray, prior: PriorModel, cfg: PscConfig,
                             seed: Optional[int] = None, sampler_id: Optional[str] = None) -> np.ndarray:
    """One posterior draw (sample index 0 of the restoration streams)."""
    return _posterior_draws(rows, y_deq, prior, cfg, 1, seed, sampler_id)[0]


@register_restorer('pinv')
def _pinv(rows, y_deq, prior, cfg, n_avg):
    return restore_pinv(rows, y_deq, cfg.prescale)


@register_restorer('mean')
def _mean(rows, y_deq, prior, cfg, n_avg):
    return restore_posterior_mean(rows, y_deq, prior, cfg, n_avg)


@register_restorer('sample')
def _sample(rows, y_deq, prior, cfg, n_avg):
    return restore_posterior_sample(rows, y_deq, prior, cfg)


def restore(mode: str, rows: np.ndarray, y_deq: np.ndarray, prior: PriorModel, cfg: PscConfig,
            n_avg: int = DEFAULT_AVERAGE) -> np.ndarray:
    """Dispatch to the restoration registered as `mode`."""
    try:
        restorer = _RESTORERS[mode]
    except KeyError:
        raise ConfigInvalid(f"unknown restoration mode {mode!r}; use one of {restoration_modes()}") from None
    return restorer(rows, y_deq, prior, cfg, n_avg)
