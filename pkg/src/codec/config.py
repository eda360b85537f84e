"""
Codec configuration.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from src.entropy import ENTROPY_CODERS
from src.quant import QUANTIZERS
from src.sampler import SamplerConfig, sampler_registry
from src.selection import SelectionMode, default_sample_count
from src.utils.errors import ConfigInvalid

DEFAULT_ROWS = 12
MAX_NDIM = 255
_U32 = (1 << 32) - 1


@dataclass
class PscConfig:
    """
    All hyperparameters of one encode/decode job.

    Attributes:
        shape: signal dimensions; their product is D.
        n_iter: N, number of selection iterations.
        r: rows appended per iteration.
        s: posterior samples per iteration; defaults to max(r + 2, ⌊4r/3⌋).
        sampler_id: sampler used for row selection and restoration.
        selection_mode: 'sample-pca' or 'exact-cov'.
        sampler: DDRM-NL hyperparameters (T, η, η_b).
        seed: 64-bit seed shared by encoder and decoder.
        quantizer_id: measurement quantizer.
        entropy_id: payload entropy coder.
        prescale: measurements are quantized as prescale · Hx.
        threads: worker cap for sample batches (not part of the stream).
    """
    shape: Tuple[int, ...]
    n_iter: int
    r: int = DEFAULT_ROWS
    s: Optional[int] = None
    sampler_id: str = 'ddrm-nl'
    selection_mode: str = 'sample-pca'
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    seed: int = 0
    quantizer_id: str = 'e4m3'
    entropy_id: str = 'range-o0'
    prescale: float = 1.0
    threads: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        self.shape = tuple(int(d) for d in self.shape)
        if self.s is None:
            self.s = default_sample_count(self.r)

    @property
    def dim(self) -> int:
        return math.prod(self.shape)

    @property
    def total_measurements(self) -> int:
        return self.n_iter * self.r

    @property
    def mode(self) -> SelectionMode:
        return SelectionMode.from_label(self.selection_mode)

    def validate(self) -> None:
        """Raise ConfigInvalid on the first violated invariant."""
        if not 1 <= len(self.shape) <= MAX_NDIM or any(d < 1 or d > _U32 for d in self.shape):
            raise ConfigInvalid(f"invalid signal shape {self.shape}")
        if self.r < 1:
            raise ConfigInvalid(f"r must be at least 1, got {self.r}")
        if self.n_iter < 0:
            raise ConfigInvalid(f"N must be non-negative, got {self.n_iter}")
        if self.total_measurements > self.dim:
            raise ConfigInvalid(f"N·r = {self.total_measurements} exceeds D = {self.dim}")
        if self.s < self.r + 1:
            raise ConfigInvalid(f"s = {self.s} must be at least r + 1 = {self.r + 1}")
        if self.s > _U32:
            raise ConfigInvalid(f"s = {self.s} does not fit the header")
        sampler_registry.get(self.sampler_id)
        SelectionMode.from_label(self.selection_mode)
        if self.quantizer_id not in QUANTIZERS:
            raise ConfigInvalid(f"unknown quantizer {self.quantizer_id!r}")
        if self.entropy_id not in ENTROPY_CODERS:
            raise ConfigInvalid(f"unknown entropy coder {self.entropy_id!r}")
        if not 0 <= self.seed < (1 << 64):
            raise ConfigInvalid(f"seed must fit in 64 bits, got {self.seed}")
        if not (math.isfinite(self.prescale) and self.prescale > 0.0):
            raise ConfigInvalid(f"prescale must be positive and finite, got {self.prescale}")
        if self.sampler.schedule is not None:
            raise ConfigInvalid("the codec derives its noise schedule from the prior; "
                                "explicit schedules cannot be carried in the stream")
        self.sampler.validate()
