"""
Row selection: the next r transform rows are the principal directions of
the current posterior uncertainty.

Two modes share the same post-processing (orthonormalisation against H and
the sign convention):

    sample-pca  top-r right singular vectors of s centred posterior samples
    exact-cov   top-r eigenvectors of the closed-form posterior covariance
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from src.linalg import (
    empty_rows,
    orthonormalize_against,
    sym_eig_desc,
    top_r_right_singular_vectors,
)
from src.priors.gaussian import GaussianPrior, gaussian_posterior_moments
from src.priors.gmm import GmmPrior, condition_components
from src.priors.interface import PriorModel
from src.sampler import SamplerConfig, sample_batch
from src.utils.errors import ConfigInvalid, DimensionExhausted, RankDeficient
from src.utils.logger import get_logger

logger = get_logger(__name__)


class SelectionMode(Enum):
    """Row selection strategy; the value is the wire code."""
    SAMPLE_PCA = 0
    EXACT_COV = 1

    @property
    def label(self) -> str:
        return self.name.lower().replace('_', '-')

    @classmethod
    def from_label(cls, label: str) -> 'SelectionMode':
        for mode in cls:
            if mode.label == label:
                return mode
        raise ConfigInvalid(f"unknown selection mode {label!r}; use sample-pca or exact-cov")


def default_sample_count(r: int) -> int:
    """max(r + 2, ⌊4r/3⌋): centring costs one rank, so s must exceed r."""
    return max(r + 2, (4 * r) // 3)


@dataclass
class SelectionContext:
    """Everything one selection step needs besides H and y."""
    prior: PriorModel
    sampler_id: str
    cfg: SamplerConfig
    seed: int
    iteration: int
    s: int
    threads: Optional[int] = None


def _check_room(rows: np.ndarray, r: int) -> None:
    k, dim = rows.shape
    if k + r > dim:
        raise DimensionExhausted(f"cannot select {r} rows after {k} in dimension {dim}")


def select_new_rows(rows: np.ndarray, y_deq: np.ndarray, r: int, ctx: SelectionContext) -> np.ndarray:
    """
    Sample-PCA selection of r new rows.

    A rank-deficient sample matrix is not an error: the resolvable directions
    are kept and the rest come from the canonical-basis fallback.
    """
    _check_room(rows, r)
    if r == 0:
        return empty_rows(rows.shape[1])
    if ctx.s < r + 1:
        raise ConfigInvalid(f"s = {ctx.s} samples cannot resolve r = {r} directions after centring")

    samples = sample_batch(ctx.sampler_id, ctx.prior, rows, y_deq, ctx.s, ctx.cfg,
                           ctx.seed, ctx.iteration, threads=ctx.threads)
    centered = samples - samples.mean(axis=0)
    try:
        candidates = top_r_right_singular_vectors(centered, r)
    except RankDeficient as e:
        logger.warning(f"iteration {ctx.iteration}: sample matrix has rank {e.rank} < r = {r}; "
                       f"using canonical fallback for {r - e.rank} rows")
        candidates = np.vstack([e.rows, np.zeros((r - e.rows.shape[0], rows.shape[1]))])
    return orthonormalize_against(candidates, rows)


def posterior_covariance(prior: PriorModel, rows: np.ndarray,
                         y: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Closed-form covariance of p(x | Hx = y).

    For a Gaussian prior it does not depend on y. For a mixture it is the
    covariance of the reweighted mixture and y is required.
    """
    k = rows.shape[0]
    if isinstance(prior, GaussianPrior):
        return gaussian_posterior_moments(prior, rows, np.zeros(k) if y is None else y)[1]
    if isinstance(prior, GmmPrior):
        if y is None:
            raise ValueError("a mixture posterior covariance depends on y")
        conds, weights = condition_components(prior, rows, y)
        mean = sum(w * c.mean for w, c in zip(weights, conds))
        second = sum(w * (c.covariance + np.outer(c.mean, c.mean)) for w, c in zip(weights, conds))
        cov = second - np.outer(mean, mean)
        return 0.5 * (cov + cov.T)
    raise ConfigInvalid(f"exact-cov selection is not available for a {prior.kind} prior")


def select_new_rows_exact(prior: PriorModel, rows: np.ndarray, r: int,
                          y: Optional[np.ndarray] = None) -> np.ndarray:
    """Top-r eigenvectors of the posterior covariance, orthonormalised against H."""
    _check_room(rows, r)
    if r == 0:
        return empty_rows(rows.shape[1])
    _, vecs = sym_eig_desc(posterior_covariance(prior, rows, y))
    return orthonormalize_against(vecs[:r], rows)
