"""
Sampler registry.

Samplers are registered by id with the @register_sampler decorator. Each id
also has a one-byte wire code recorded in the bitstream header, so the set of
codes is part of the format.
"""

from abc import ABC, abstractmethod
from dataclasses import replace
from typing import Callable, Dict, List, Type

import numpy as np

from src.determinism import RngStream
from src.priors.gaussian import GaussianPrior, factor_posterior
from src.priors.gmm import GmmPrior, condition_gmm
from src.priors.interface import PriorModel
from src.sampler.ddrm import ddrm_nl_sample
from src.sampler.schedule import SamplerConfig
from src.utils.errors import ConfigInvalid, UnknownSamplerId
from src.utils.logger import get_logger

logger = get_logger(__name__)

DrawFn = Callable[[RngStream], np.ndarray]


class BaseSampler(ABC):
    """
    A posterior sampler for p(x | Hx = y).

    bind() does the per-batch work once (conditioning, factorisation, schedule
    resolution) and returns a function mapping a fresh stream to one draw.
    """

    sampler_id: str = ''
    wire_code: int = -1

    @classmethod
    def supports(cls, prior: PriorModel) -> bool:
        return True

    @abstractmethod
    def bind(self, prior: PriorModel, rows: np.ndarray, y: np.ndarray,
             cfg: SamplerConfig) -> DrawFn:
        """Prepare draws for one (prior, H, y) triple."""


class SamplerRegistry:
    """Lookup of sampler classes by id and by wire code."""

    def __init__(self):
        self._by_id: Dict[str, Type[BaseSampler]] = {}
        self._by_code: Dict[int, Type[BaseSampler]] = {}

    def register(self, sampler_class: Type[BaseSampler]) -> None:
        sid, code = sampler_class.sampler_id, sampler_class.wire_code
        if sid in self._by_id or code in self._by_code:
            raise ValueError(f"sampler id {sid!r} or wire code {code} already registered")
        self._by_id[sid] = sampler_class
        self._by_code[code] = sampler_class
        logger.debug(f"Registered sampler: {sid} (code {code})")

    def ids(self) -> List[str]:
        return sorted(self._by_id)

    def get(self, sampler_id: str) -> Type[BaseSampler]:
        try:
            return self._by_id[sampler_id]
        except KeyError:
            raise UnknownSamplerId(
                f"unknown sampler {sampler_id!r}; registered: {', '.join(self.ids())}"
            ) from None

    def code_of(self, sampler_id: str) -> int:
        return self.get(sampler_id).wire_code

    def id_for_code(self, code: int) -> str:
        try:
            return self._by_code[code].sampler_id
        except KeyError:
            raise UnknownSamplerId(f"unknown sampler wire code {code}") from None

    def create(self, sampler_id: str, prior: PriorModel) -> BaseSampler:
        cls = self.get(sampler_id)
        if not cls.supports(prior):
            raise ConfigInvalid(f"sampler {sampler_id!r} cannot sample a {prior.kind} prior")
        return cls()


sampler_registry = SamplerRegistry()


def register_sampler(sampler_class: Type[BaseSampler]) -> Type[BaseSampler]:
    """Decorator to register a sampler class."""
    sampler_registry.register(sampler_class)
    return sampler_class


@register_sampler
class DdrmNlSampler(BaseSampler):
    """Diffusion-style sampler over the prior's denoiser."""

    sampler_id = 'ddrm-nl'
    wire_code = 0

    def bind(self, prior, rows, y, cfg):
        resolved = replace(cfg, schedule=cfg.resolve(prior))
        return lambda stream: ddrm_nl_sample(prior, rows, y, resolved, stream)


@register_sampler
class ExactGaussianSampler(BaseSampler):
    """Closed-form Gaussian posterior draws."""

    sampler_id = 'exact-gaussian'
    wire_code = 1

    @classmethod
    def supports(cls, prior):
        return isinstance(prior, GaussianPrior)

    def bind(self, prior, rows, y, cfg):
        return factor_posterior(prior, rows, y).draw


@register_sampler
class ExactGmmSampler(BaseSampler):
    """Closed-form mixture posterior draws."""

    sampler_id = 'exact-gmm'
    wire_code = 2

    @classmethod
    def supports(cls, prior):
        return isinstance(prior, GmmPrior)

    def bind(self, prior, rows, y, cfg):
        return condition_gmm(prior, rows, y).draw


@register_sampler
class ExactSampler(BaseSampler):
    """Whichever exact sampler matches the prior family."""

    sampler_id = 'exact'
    wire_code = 3

    @classmethod
    def supports(cls, prior):
        return bool(prior.exact_sampler_id)

    def bind(self, prior, rows, y, cfg):
        return sampler_registry.create(prior.exact_sampler_id, prior).bind(prior, rows, y, cfg)
