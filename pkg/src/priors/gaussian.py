"""
Gaussian prior: closed-form denoiser, conditioning and exact posterior draws.

The covariance is eigen-factorized once at construction so every
(Σ + σ²I)⁻¹ solve is a diagonal rescale in the eigenbasis.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from src.determinism import RngStream, gauss
from src.linalg import sym_eig_desc
from src.priors.interface import PriorModel, canonical_bytes
from src.utils.errors import DegenerateGram, PriorConfigError

PSD_TOL = 1e-10
RIDGE = 1e-12
MAX_GRAM_CONDITION = 1e15
EIG_FLOOR = 1e-9
LOG_2PI = math.log(2.0 * math.pi)


class GaussianPrior(PriorModel):
    """
    N(mean, covariance).

    Attributes:
        mean: (D,) vector.
        covariance: (D, D) symmetric PSD matrix.
        eigenvalues: descending, clipped at zero.
        eigenvectors: (D, D), rows are eigenvectors.
    """

    kind = 'gaussian'
    exact_sampler_id = 'exact-gaussian'

    def __init__(self, mean: np.ndarray, covariance: np.ndarray, name: str = ''):
        super().__init__(name)
        mean = np.asarray(mean, dtype=np.float64).reshape(-1)
        cov = np.asarray(covariance, dtype=np.float64)
        if cov.shape != (mean.size, mean.size):
            raise PriorConfigError(
                f"covariance shape {cov.shape} does not match mean dimension {mean.size}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise PriorConfigError("prior parameters must be finite")
        cov = 0.5 * (cov + cov.T)
        evals, evecs = sym_eig_desc(cov)
        if evals.size and evals[-1] < -PSD_TOL * max(1.0, float(evals[0])):
            raise PriorConfigError(f"covariance is not PSD (eigenvalue {evals[-1]:.3e})")
        self.mean = mean
        self.covariance = cov
        self.eigenvalues = np.clip(evals, 0.0, None)
        self.eigenvectors = evecs

    @property
    def dim(self) -> int:
        return self.mean.size

    def denoise(self, x_t: np.ndarray, sigma: float) -> np.ndarray:
        return gaussian_denoise(self, x_t, sigma)

    def log_density(self, x: np.ndarray, sigma: float = 0.0) -> np.ndarray:
        var = self.eigenvalues + sigma * sigma
        coef = (np.asarray(x, dtype=np.float64) - self.mean) @ self.eigenvectors.T
        with np.errstate(divide='ignore', invalid='ignore'):
            quad = np.sum(coef * coef / var, axis=-1)
            logdet = float(np.sum(np.log(var)))
        return -0.5 * (quad + logdet + self.dim * LOG_2PI)

    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[0]) if self.dim else 0.0

    def moments(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.mean.copy(), self.covariance.copy()

    def draw(self, stream: RngStream, n: int = 1) -> np.ndarray:
        scale = np.sqrt(self.eigenvalues)
        out = np.empty((n, self.dim))
        for i in range(n):
            out[i] = self.mean + (scale * gauss(stream, self.dim)) @ self.eigenvectors
        return out

    def _digest_parts(self) -> Iterable[bytes]:
        yield canonical_bytes(self.mean)
        yield canonical_bytes(self.covariance)


def gaussian_denoise(prior: GaussianPrior, x_t: np.ndarray, sigma: float) -> np.ndarray:
    """μ + Σ(Σ + σ²I)⁻¹(x_t − μ), evaluated in the eigenbasis."""
    x_t = np.asarray(x_t, dtype=np.float64)
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0.0:
        return x_t.copy()
    shrink = prior.eigenvalues / (prior.eigenvalues + sigma * sigma)
    coef = (x_t - prior.mean) @ prior.eigenvectors.T
    return prior.mean + (coef * shrink) @ prior.eigenvectors


@dataclass
class GaussianConditional:
    """Moments of x | Hx = y plus the log evidence log N(y; Hμ, HΣHᵀ)."""
    mean: np.ndarray
    covariance: np.ndarray
    log_evidence: float


def condition_gaussian(prior: GaussianPrior, rows: np.ndarray, y: np.ndarray) -> GaussianConditional:
    """
    Noiseless conditioning of a Gaussian prior on linear measurements.

    Raises:
        DegenerateGram: HΣHᵀ is singular even after the trace-scaled ridge.
    """
    k = rows.shape[0]
    if k == 0:
        return GaussianConditional(prior.mean.copy(), prior.covariance.copy(), 0.0)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size != k:
        raise ValueError(f"expected {k} measurements, got {y.size}")

    sigma_ht = prior.covariance @ rows.T
    gram = rows @ sigma_ht
    gram = 0.5 * (gram + gram.T) + RIDGE * float(np.trace(prior.covariance)) * np.eye(k)
    g_evals, g_vecs = sym_eig_desc(gram)
    if g_evals[-1] <= 0.0 or g_evals[0] > MAX_GRAM_CONDITION * g_evals[-1]:
        raise DegenerateGram(
            f"H Σ Hᵀ is numerically singular (eigenvalues {g_evals[0]:.3e} .. {g_evals[-1]:.3e})"
        )

    residual = y - rows @ prior.mean
    proj = g_vecs @ residual
    gain = sigma_ht @ g_vecs.T / g_evals           # Σ Hᵀ U diag(1/λ)
    mean = prior.mean + gain @ proj
    cov = prior.covariance - gain @ (g_vecs @ sigma_ht.T)
    cov = 0.5 * (cov + cov.T)

    log_evidence = -0.5 * (float(np.sum(proj * proj / g_evals))
                           + float(np.sum(np.log(g_evals))) + k * LOG_2PI)
    return GaussianConditional(mean, cov, log_evidence)


def gaussian_posterior_moments(prior: GaussianPrior, rows: np.ndarray,
                               y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(mean, covariance) of p(x | Hx = y)."""
    cond = condition_gaussian(prior, rows, y)
    return cond.mean, cond.covariance


@dataclass
class PosteriorFactor:
    """
    Eigen-factorized Gaussian posterior, reused for every draw of a batch.

    A draw consumes gauss(stream, D) and returns mean + Vᵀ(√λ ⊙ ε), with ε
    indexed in descending-eigenvalue order.
    """
    mean: np.ndarray
    scales: np.ndarray
    basis: np.ndarray

    def draw(self, stream: RngStream) -> np.ndarray:
        eps = gauss(stream, self.mean.size)
        return self.mean + (self.scales * eps) @ self.basis


def make_factor(prior: GaussianPrior, cond: GaussianConditional, k: int) -> PosteriorFactor:
    """
    Eigen-factorize a conditional covariance.

    Eigenvalues below 1e-9 * tr(Σ_prior) are ridge residue and are zeroed, so
    a fully measured signal draws its posterior mean exactly.
    """
    if k == 0:
        return PosteriorFactor(prior.mean.copy(), np.sqrt(prior.eigenvalues), prior.eigenvectors)
    evals, evecs = sym_eig_desc(cond.covariance)
    floor = EIG_FLOOR * float(np.trace(prior.covariance))
    evals = np.where(evals > floor, evals, 0.0)
    return PosteriorFactor(cond.mean, np.sqrt(evals), evecs)


def factor_posterior(prior: GaussianPrior, rows: np.ndarray, y: np.ndarray) -> PosteriorFactor:
    """Condition and eigen-factorize once for a batch of draws."""
    return make_factor(prior, condition_gaussian(prior, rows, y), rows.shape[0])


def gaussian_exact_posterior_sample(prior: GaussianPrior, rows: np.ndarray, y: np.ndarray,
                                    stream: RngStream) -> np.ndarray:
    """One exact draw from p(x | Hx = y)."""
    return factor_posterior(prior, rows, y).draw(stream)
