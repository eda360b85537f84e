"""
Batches of posterior samples.

Sample i of a batch always uses derive_stream(seed, tag, iteration, i), so a
batch can be computed in any order, on any number of threads, or one index
at a time, with identical results.
"""

import concurrent.futures
from typing import Optional, Sequence

import numpy as np

from src.determinism import DomainTag, derive_stream
from src.priors.interface import PriorModel
from src.sampler.registry import DrawFn, sampler_registry
from src.sampler.schedule import SamplerConfig
from src.utils.env import worker_count


def bind_sampler(sampler_id: str, prior: PriorModel, rows: np.ndarray, y_deq: np.ndarray,
                 cfg: SamplerConfig) -> DrawFn:
    """Resolve `sampler_id` and prepare it for (prior, H, y)."""
    return sampler_registry.create(sampler_id, prior).bind(
        prior, rows, np.asarray(y_deq, dtype=np.float64).reshape(-1), cfg)


def draw_indices(draw: DrawFn, indices: Sequence[int], seed: int, iteration: int,
                 domain_tag: int = DomainTag.SELECT, threads: Optional[int] = None) -> np.ndarray:
    """Draws for the given sample indices, stacked in the order given."""
    def one(i: int) -> np.ndarray:
        return draw(derive_stream(seed, domain_tag, iteration, i))

    threads = worker_count() if threads is None else threads
    if threads <= 1 or len(indices) <= 1:
        return np.vstack([one(i) for i in indices])
    with concurrent.futures.ThreadPoolExecutor(max_workers=min(threads, len(indices))) as ex:
        return np.vstack(list(ex.map(one, indices)))


def sample_batch(sampler_id: str, prior: PriorModel, rows: np.ndarray, y_deq: np.ndarray,
                 s: int, cfg: SamplerConfig, seed: int, iteration: int,
                 domain_tag: int = DomainTag.SELECT, threads: Optional[int] = None) -> np.ndarray:
    """
    s posterior draws (s x D) from the sampler registered as `sampler_id`.

    Raises:
        UnknownSamplerId: no sampler registered under sampler_id.
    """
    if s < 1:
        raise ValueError(f"batch size must be at least 1, got {s}")
    draw = bind_sampler(sampler_id, prior, rows, y_deq, cfg)
    return draw_indices(draw, range(s), seed, iteration, domain_tag, threads)
