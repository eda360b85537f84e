"""
DDRM specialised to noiseless measurements through orthonormal rows.

With orthonormal H the spectral split is (H, P⊥ = I − HᵀH) and every singular
value is one, so each step costs O(kD) plus one denoiser call.

Draw order per chain (normative, part of the codec's sync contract):
    init:          ε_m = gauss(k), then ε = gauss(D)
    each step:     ε_m' = gauss(k), then ε' = gauss(D)
"""

import math
from dataclasses import dataclass

import numpy as np

from src.determinism import RngStream, gauss
from src.linalg import project_complement
from src.priors.gaussian import GaussianPrior
from src.priors.interface import Denoiser, PriorModel
from src.sampler.schedule import NoiseSchedule, SamplerConfig, default_schedule
from src.utils.errors import ConfigInvalid


def _schedule_for(denoiser: Denoiser, cfg: SamplerConfig) -> NoiseSchedule:
    if cfg.schedule is not None:
        return cfg.schedule
    if isinstance(denoiser, PriorModel):
        return default_schedule(denoiser, cfg.steps)
    raise ConfigInvalid("an explicit noise schedule is required for this denoiser")


def ddrm_nl_sample(denoiser: Denoiser, rows: np.ndarray, y_deq: np.ndarray,
                   cfg: SamplerConfig, stream: RngStream) -> np.ndarray:
    """
    One posterior draw given Hx = y_deq.

    Args:
        denoiser: MMSE denoiser of the prior.
        rows: H, k x D with orthonormal rows (k may be 0).
        y_deq: k dequantized measurements.
        cfg: η, η_b and the schedule.
        stream: fresh stream owned by this draw.
    """
    sigmas = _schedule_for(denoiser, cfg).sigmas
    k, dim = rows.shape
    y = np.asarray(y_deq, dtype=np.float64).reshape(-1)
    eta, eta_b = cfg.eta, cfg.eta_b
    keep = math.sqrt(max(0.0, 1.0 - eta * eta))

    sigma = sigmas[0]
    eps_m = gauss(stream, k)
    eps = gauss(stream, dim)
    x = (y + sigma * eps_m) @ rows + sigma * project_complement(eps, rows)

    for j in range(1, sigmas.size):
        sigma_prev, sigma = sigmas[j - 1], sigmas[j]
        x0 = denoiser.denoise(x, sigma_prev)
        eps_m = gauss(stream, k)
        eps = gauss(stream, dim)

        c = (1.0 - eta_b) * (rows @ x0) + eta_b * y + sigma * eps_m
        u = project_complement(x0 + keep * sigma * (x - x0) / sigma_prev + eta * sigma * eps, rows)
        x = c @ rows + u

    return denoiser.denoise(x, sigmas[-1])


@dataclass
class ChainMoments:
    """Mean and covariance of the DDRM-NL output under a Gaussian prior."""
    mean: np.ndarray
    covariance: np.ndarray


def _shrink_matrix(prior: GaussianPrior, sigma: float) -> np.ndarray:
    """A = Σ(Σ + σ²I)⁻¹, the linear part of the Gaussian denoiser."""
    shrink = prior.eigenvalues / (prior.eigenvalues + sigma * sigma)
    return (prior.eigenvectors.T * shrink) @ prior.eigenvectors


def ddrm_nl_gaussian_moments(prior: GaussianPrior, rows: np.ndarray, y: np.ndarray,
                             cfg: SamplerConfig) -> ChainMoments:
    """
    Exact output distribution of ddrm_nl_sample for a Gaussian prior.

    Every step is affine in x plus independent Gaussian noise, so the chain
    is propagated in closed form:
        x' = L x + b + noise,  L = M A + β P⊥,  b = M(μ − Aμ) + η_b Hᵀy,
        M = (1 − η_b) HᵀH + (1 − β) P⊥,  β = √(1 − η²) σ_t / σ_{t+1},
        Cov(noise) = σ_t² (HᵀH + η² P⊥).
    """
    sigmas = cfg.resolve(prior).sigmas
    dim = rows.shape[1]
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    eye = np.eye(dim)
    proj_h = rows.T @ rows
    proj_c = eye - proj_h
    mu = prior.mean
    eta, eta_b = cfg.eta, cfg.eta_b
    keep = math.sqrt(max(0.0, 1.0 - eta * eta))

    anchor = y @ rows
    mean = anchor.copy()
    cov = sigmas[0] ** 2 * eye
    for j in range(1, sigmas.size):
        sigma_prev, sigma = sigmas[j - 1], sigmas[j]
        a = _shrink_matrix(prior, sigma_prev)
        beta = keep * sigma / sigma_prev
        m = (1.0 - eta_b) * proj_h + (1.0 - beta) * proj_c
        lin = m @ a + beta * proj_c
        offset = m @ (mu - a @ mu) + eta_b * anchor
        mean = lin @ mean + offset
        cov = lin @ cov @ lin.T + sigma * sigma * (proj_h + eta * eta * proj_c)

    a = _shrink_matrix(prior, sigmas[-1])
    out_cov = a @ cov @ a.T
    return ChainMoments(mean=mu + a @ (mean - mu), covariance=0.5 * (out_cov + out_cov.T))

