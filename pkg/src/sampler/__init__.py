# Posterior samplers package
from src.sampler.batch import bind_sampler, draw_indices, sample_batch
from src.sampler.ddrm import ChainMoments, ddrm_nl_gaussian_moments, ddrm_nl_sample
from src.sampler.registry import BaseSampler, register_sampler, sampler_registry
from src.sampler.schedule import (
    DEFAULT_STEPS,
    NoiseSchedule,
    SamplerConfig,
    default_schedule,
    geometric_schedule,
)

__all__ = [
    'BaseSampler',
    'ChainMoments',
    'DEFAULT_STEPS',
    'NoiseSchedule',
    'SamplerConfig',
    'bind_sampler',
    'ddrm_nl_gaussian_moments',
    'ddrm_nl_sample',
    'default_schedule',
    'draw_indices',
    'geometric_schedule',
    'register_sampler',
    'sample_batch',
    'sampler_registry',
]
