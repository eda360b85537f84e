"""
Gaussian-mixture prior.

Every quantity is exact: the smoothed density is again a mixture, so the
MMSE denoiser is a responsibility-weighted sum of per-component Gaussian
denoisers, and the posterior given Hx = y is a reweighted mixture of the
per-component Gaussian posteriors.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from src.determinism import RngStream, uniform
from src.priors.gaussian import (
    GaussianPrior,
    PosteriorFactor,
    condition_gaussian,
    gaussian_denoise,
    make_factor,
)
from src.priors.interface import PriorModel, canonical_bytes
from src.utils.errors import PriorConfigError

WEIGHT_SUM_TOL = 1e-9


class GmmPrior(PriorModel):
    """
    Σ_k w_k N(μ_k, Σ_k).

    Attributes:
        weights: (K,) positive, summing to one.
        components: K GaussianPrior objects of equal dimension.
    """

    kind = 'gmm'
    exact_sampler_id = 'exact-gmm'

    def __init__(self, weights: Sequence[float], components: Sequence[GaussianPrior], name: str = ''):
        super().__init__(name)
        weights = np.asarray(weights, dtype=np.float64).reshape(-1)
        if len(components) == 0:
            raise PriorConfigError("a mixture needs at least one component")
        if weights.size != len(components):
            raise PriorConfigError(f"{weights.size} weights for {len(components)} components")
        if np.any(weights <= 0.0) or not np.all(np.isfinite(weights)):
            raise PriorConfigError("mixture weights must be positive and finite")
        if abs(float(weights.sum()) - 1.0) > WEIGHT_SUM_TOL:
            raise PriorConfigError(f"mixture weights sum to {weights.sum():.12f}, expected 1")
        dims = {c.dim for c in components}
        if len(dims) != 1:
            raise PriorConfigError(f"components disagree on dimension: {sorted(dims)}")
        self.weights = weights
        self.log_weights = np.log(weights)
        self.components: List[GaussianPrior] = list(components)

    @property
    def dim(self) -> int:
        return self.components[0].dim

    def denoise(self, x_t: np.ndarray, sigma: float) -> np.ndarray:
        return gmm_denoise(self, x_t, sigma)

    def responsibilities(self, x: np.ndarray, sigma: float) -> np.ndarray:
        """Posterior component probabilities given x observed at noise sigma; (..., K)."""
        log_r = np.stack([lw + c.log_density(x, sigma)
                          for lw, c in zip(self.log_weights, self.components)], axis=-1)
        return np.exp(log_r - logsumexp(log_r, axis=-1, keepdims=True))

    def log_density(self, x: np.ndarray, sigma: float = 0.0) -> np.ndarray:
        log_r = np.stack([lw + c.log_density(x, sigma)
                          for lw, c in zip(self.log_weights, self.components)], axis=-1)
        return logsumexp(log_r, axis=-1)

    def max_eigenvalue(self) -> float:
        return max(c.max_eigenvalue() for c in self.components)

    def moments(self) -> Tuple[np.ndarray, np.ndarray]:
        mean = sum(w * c.mean for w, c in zip(self.weights, self.components))
        second = sum(w * (c.covariance + np.outer(c.mean, c.mean))
                     for w, c in zip(self.weights, self.components))
        cov = second - np.outer(mean, mean)
        return mean, 0.5 * (cov + cov.T)

    def draw(self, stream: RngStream, n: int = 1) -> np.ndarray:
        out = np.empty((n, self.dim))
        for i in range(n):
            k = pick_component(self.weights, stream)
            out[i] = self.components[k].draw(stream, 1)[0]
        return out

    def _digest_parts(self) -> Iterable[bytes]:
        yield canonical_bytes(self.weights)
        for c in self.components:
            yield canonical_bytes(c.mean)
            yield canonical_bytes(c.covariance)


def pick_component(weights: np.ndarray, stream: RngStream) -> int:
    """Inverse-CDF component choice from one uniform word, none for K = 1."""
    if weights.size == 1:
        return 0
    u = float(uniform(stream, 1)[0])
    k = int(np.searchsorted(np.cumsum(weights), u, side='right'))
    return min(k, weights.size - 1)


def gmm_denoise(prior: GmmPrior, x_t: np.ndarray, sigma: float) -> np.ndarray:
    """Σ_k γ_k(x_t) · denoise_k(x_t, σ) with γ from the σ-smoothed mixture."""
    x_t = np.asarray(x_t, dtype=np.float64)
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0.0:
        return x_t.copy()
    resp = prior.responsibilities(x_t, sigma)
    out = np.zeros_like(x_t)
    for k, comp in enumerate(prior.components):
        out = out + resp[..., k, None] * gaussian_denoise(comp, x_t, sigma)
    return out


@dataclass
class GmmPosterior:
    """
    p(x | Hx = y) as a mixture of per-component Gaussian posteriors.

    A draw consumes one uniform word for the component, then gauss(stream, D)
    inside that component.
    """
    weights: np.ndarray
    factors: List[PosteriorFactor]

    @property
    def mean(self) -> np.ndarray:
        return sum(w * f.mean for w, f in zip(self.weights, self.factors))

    def draw(self, stream: RngStream) -> np.ndarray:
        k = pick_component(self.weights, stream)
        return self.factors[k].draw(stream)


def condition_components(prior: GmmPrior, rows: np.ndarray, y: np.ndarray):
    """Per-component Gaussian conditionals and the posterior mixture weights."""
    conds = [condition_gaussian(c, rows, y) for c in prior.components]
    log_w = prior.log_weights + np.array([c.log_evidence for c in conds])
    return conds, np.exp(log_w - logsumexp(log_w))


def condition_gmm(prior: GmmPrior, rows: np.ndarray, y: np.ndarray) -> GmmPosterior:
    """Condition every component and reweight by its evidence N(y; Hμ_k, HΣ_kHᵀ)."""
    conds, weights = condition_components(prior, rows, y)
    factors = [make_factor(comp, cond, rows.shape[0]) for comp, cond in zip(prior.components, conds)]
    return GmmPosterior(weights, factors)


def gmm_posterior_weights(prior: GmmPrior, rows: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Posterior mixture weights given Hx = y."""
    return condition_components(prior, rows, y)[1]


def gmm_posterior_mean(prior: GmmPrior, rows: np.ndarray, y: np.ndarray) -> np.ndarray:
    """E[x | Hx = y] in closed form."""
    conds, weights = condition_components(prior, rows, y)
    return sum(w * c.mean for w, c in zip(weights, conds))


def gmm_exact_posterior_sample(prior: GmmPrior, rows: np.ndarray, y: np.ndarray,
                               stream: RngStream) -> np.ndarray:
    """One exact draw from p(x | Hx = y)."""
    return condition_gmm(prior, rows, y).draw(stream)
