# Prior models package
from src.priors.config import build_prior, load_prior, parse_prior_text, register_covariance
from src.priors.gaussian import (
    GaussianPrior,
    PosteriorFactor,
    condition_gaussian,
    factor_posterior,
    gaussian_denoise,
    gaussian_exact_posterior_sample,
    gaussian_posterior_moments,
)
from src.priors.gmm import (
    GmmPosterior,
    GmmPrior,
    condition_gmm,
    gmm_denoise,
    gmm_exact_posterior_sample,
    gmm_posterior_mean,
    gmm_posterior_weights,
)
from src.priors.interface import Denoiser, PriorModel

__all__ = [
    'Denoiser',
    'PriorModel',
    'GaussianPrior',
    'GmmPrior',
    'GmmPosterior',
    'PosteriorFactor',
    'build_prior',
    'condition_gaussian',
    'condition_gmm',
    'factor_posterior',
    'gaussian_denoise',
    'gaussian_exact_posterior_sample',
    'gaussian_posterior_moments',
    'gmm_denoise',
    'gmm_exact_posterior_sample',
    'gmm_posterior_mean',
    'gmm_posterior_weights',
    'load_prior',
    'parse_prior_text',
    'register_covariance',
]
