"""
Codec session - the synchronized transform-construction loop.

Encoder and decoder each run a CodecSession over the same prior and
configuration. Iteration n selects r rows from the state (H, y) built so far
and then appends r measurements: the encoder measures the signal, the
decoder reads the next r codes from the payload. Because selection only
depends on (H, y, prior, config, n) and y is always the dequantized codes,
both sides grow bit-identical transforms.
"""

import hashlib
from typing import Callable, Optional

import numpy as np

from src.codec.config import PscConfig
from src.codec.record import MeasurementRecord
from src.linalg import empty_rows
from src.priors.interface import PriorModel
from src.selection import SelectionContext, SelectionMode, select_new_rows, select_new_rows_exact
from src.utils.logger import get_logger

logger = get_logger(__name__)

Measure = Callable[[int, np.ndarray], None]


def transform_digest(rows: np.ndarray) -> str:
    """64-bit BLAKE2b over the float64 little-endian row-major bytes of H, as hex."""
    data = np.ascontiguousarray(rows, dtype='<f8').tobytes()
    return hashlib.blake2b(data, digest_size=8).hexdigest()


class CodecSession:
    """
    Shared encoder/decoder state.

    Attributes:
        rows: H, k x D.
        record: measurement record.
    """

    def __init__(self, prior: PriorModel, cfg: PscConfig, quantized: bool = True):
        if prior.dim != cfg.dim:
            raise ValueError(f"prior dimension {prior.dim} does not match signal size {cfg.dim}")
        self.prior = prior
        self.cfg = cfg
        self.mode = cfg.mode
        self.rows = empty_rows(cfg.dim)
        self.record = MeasurementRecord(quantized=quantized)
        self.iteration = 0

    @property
    def measurements(self) -> np.ndarray:
        """y as the samplers see it: dequantized values divided by the prescale."""
        return self.record.values / self.cfg.prescale

    def next_rows(self) -> np.ndarray:
        """Rows selected for the current iteration from the current state."""
        r = self.cfg.r
        y = self.measurements
        if self.mode is SelectionMode.EXACT_COV:
            return select_new_rows_exact(self.prior, self.rows, r, y)
        ctx = SelectionContext(
            prior=self.prior,
            sampler_id=self.cfg.sampler_id,
            cfg=self.cfg.sampler,
            seed=self.cfg.seed,
            iteration=self.iteration,
            s=self.cfg.s,
            threads=self.cfg.threads,
        )
        return select_new_rows(self.rows, y, r, ctx)

    def step(self, measure: Measure) -> np.ndarray:
        """Run one iteration; `measure(iteration, new_rows)` supplies the new codes or values."""
        new_rows = self.next_rows()
        self.rows = np.vstack([self.rows, new_rows])
        measure(self.iteration, new_rows)
        logger.debug(f"iteration {self.iteration}: k = {self.rows.shape[0]}")
        self.iteration += 1
        return new_rows

    def run(self, measure: Measure, iterations: Optional[int] = None) -> None:
        for _ in range(self.cfg.n_iter if iterations is None else iterations):
            self.step(measure)

    def digest(self) -> str:
        return transform_digest(self.rows)
