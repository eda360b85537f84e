"""
Noise schedules and sampler configuration.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.priors.interface import PriorModel
from src.utils.errors import ConfigInvalid

DEFAULT_STEPS = 25
SIGMA_MAX_FACTOR = 2.0
SIGMA_MIN_RATIO = 1e-3


@dataclass
class NoiseSchedule:
    """
    Strictly decreasing noise levels, sigmas[0] = σ_T down to sigmas[-1] = σ_1.
    """
    sigmas: np.ndarray

    def __post_init__(self):
        self.sigmas = np.asarray(self.sigmas, dtype=np.float64).reshape(-1)
        self.validate()

    @property
    def steps(self) -> int:
        return self.sigmas.size

    @property
    def sigma_max(self) -> float:
        return float(self.sigmas[0])

    @property
    def sigma_min(self) -> float:
        return float(self.sigmas[-1])

    def validate(self) -> None:
        if self.sigmas.size < 1:
            raise ConfigInvalid("noise schedule needs at least one level")
        if not np.all(np.isfinite(self.sigmas)) or np.any(self.sigmas <= 0.0):
            raise ConfigInvalid("noise levels must be positive and finite")
        if np.any(np.diff(self.sigmas) >= 0.0):
            raise ConfigInvalid("noise levels must be strictly decreasing")


def geometric_schedule(sigma_max: float, sigma_min: float, steps: int) -> NoiseSchedule:
    if steps < 2:
        raise ConfigInvalid(f"a schedule needs T >= 2 steps, got {steps}")
    if not 0.0 < sigma_min < sigma_max:
        raise ConfigInvalid(f"need 0 < sigma_min < sigma_max, got {sigma_min}, {sigma_max}")
    ratio = (sigma_min / sigma_max) ** (1.0 / (steps - 1))
    return NoiseSchedule(sigma_max * ratio ** np.arange(steps, dtype=np.float64))


def default_schedule(prior: PriorModel, steps: int = DEFAULT_STEPS) -> NoiseSchedule:
    """
    Geometric ladder from 2·√λ_max down to 1e-3 of that, λ_max being the
    largest covariance eigenvalue over all prior components.
    """
    lam = prior.max_eigenvalue()
    sigma_max = SIGMA_MAX_FACTOR * float(np.sqrt(lam)) if lam > 0.0 else 1.0
    return geometric_schedule(sigma_max, SIGMA_MIN_RATIO * sigma_max, steps)


@dataclass
class SamplerConfig:
    """
    DDRM-NL hyperparameters.

    Attributes:
        steps: T; used to build the default schedule when none is given.
        eta: complement-space noise mixing in [0, 1].
        eta_b: measurement anchoring in [0, 1].
        schedule: explicit schedule; resolved against the prior when None.
    """
    steps: int = DEFAULT_STEPS
    eta: float = 1.0
    eta_b: float = 1.0
    schedule: Optional[NoiseSchedule] = field(default=None, repr=False)

    def validate(self) -> None:
        if self.steps < 2:
            raise ConfigInvalid(f"T must be at least 2, got {self.steps}")
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigInvalid(f"eta must lie in [0, 1], got {self.eta}")
        if not 0.0 <= self.eta_b <= 1.0:
            raise ConfigInvalid(f"eta_b must lie in [0, 1], got {self.eta_b}")
        if self.schedule is not None and self.schedule.steps != self.steps:
            raise ConfigInvalid(f"schedule has {self.schedule.steps} levels, T is {self.steps}")

    def resolve(self, prior: PriorModel) -> NoiseSchedule:
        """The explicit schedule, or the default ladder for this prior."""
        if self.schedule is not None:
            return self.schedule
        return default_schedule(prior, self.steps)
