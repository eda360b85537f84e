"""
Prior models - abstract interface shared by every analytic prior.

Samplers only need the Denoiser capability; the codec additionally needs a
stable digest (to guard against decoding with the wrong prior), the largest
prior eigenvalue (to build a noise schedule) and a way to draw test signals.
"""

import hashlib
from abc import ABC, abstractmethod
from typing import Iterable

import numpy as np

from src.determinism import RngStream


class Denoiser(ABC):
    """
    MMSE denoiser capability.

    denoise(x_t, sigma) approximates E[x | x + sigma * eps = x_t] and must be
    the identity at sigma = 0.
    """

    @property
    @abstractmethod
    def dim(self) -> int:
        """Ambient dimension D."""

    @abstractmethod
    def denoise(self, x_t: np.ndarray, sigma: float) -> np.ndarray:
        """
        Denoise a vector (D,) or a batch (n, D) observed at noise level sigma.
        """


class PriorModel(Denoiser):
    """Analytic prior p(x) with closed-form smoothed density."""

    kind: str = 'prior'
    exact_sampler_id: str = ''

    def __init__(self, name: str = ''):
        self.name = name

    @abstractmethod
    def log_density(self, x: np.ndarray, sigma: float = 0.0) -> np.ndarray:
        """log p_sigma(x) for the sigma-smoothed prior; (D,) -> scalar, (n, D) -> (n,)."""

    @abstractmethod
    def max_eigenvalue(self) -> float:
        """Largest covariance eigenvalue over all components."""

    @abstractmethod
    def moments(self):
        """(mean, covariance) of the prior as a whole."""

    @abstractmethod
    def draw(self, stream: RngStream, n: int = 1) -> np.ndarray:
        """Draw n signals (n, D) from the prior using the given stream."""

    @abstractmethod
    def _digest_parts(self) -> Iterable[bytes]:
        """Canonical byte serialization feeding digest()."""

    def digest(self) -> int:
        """64-bit BLAKE2b digest of the prior parameters."""
        h = hashlib.blake2b(digest_size=8)
        h.update(self.kind.encode('ascii'))
        h.update(int(self.dim).to_bytes(4, 'little'))
        for part in self._digest_parts():
            h.update(part)
        return int.from_bytes(h.digest(), 'little')

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name={self.name!r}, dim={self.dim})"


def canonical_bytes(array: np.ndarray) -> bytes:
    """Little-endian float64 bytes of an array in row-major order."""
    return np.ascontiguousarray(array, dtype='<f8').tobytes()
