"""
Rate-distortion sweeps.

For every (rate, r) pair the sweep encodes `trials` synthetic signals drawn
from the prior, restores them with each requested mode, and runs the fixed
KLT and random-orthonormal baselines at the same measurement count. One CSV
row is produced per (rate, r, method).
"""

import concurrent.futures
import csv
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.codec import (
    PscConfig,
    baseline_names,
    baseline_rows,
    draw_source_signals,
    fixed_transform_code,
    iterations_for_bpp,
    psc_encode,
    restore,
)
from src.harness.metrics import mse, psnr_from_mse
from src.priors.interface import PriorModel
from src.utils.env import worker_count
from src.utils.errors import ConfigInvalid
from src.utils.logger import get_logger

logger = get_logger(__name__)

CSV_FIELDS = ['rate_bpp', 'r', 'mode', 'mean_psnr', 'std_psnr', 'mean_mse', 'wall_time']


@dataclass
class SweepSpec:
    """
    What to sweep.

    Attributes:
        rates: target BPP values.
        ranks: rows per iteration.
        trials: signals per point.
        modes: restoration modes applied to PSC and to the baselines.
        baselines: fixed transforms to compare against.
        base: template configuration (shape, sampler, selection, seed, ...);
            n_iter and r are overwritten per point.
        peak: PSNR reference value.
        n_avg: draws averaged by the 'mean' restoration.
        s: posterior samples per iteration for every point; None follows
            the default for each r.
    """
    rates: Sequence[float]
    ranks: Sequence[int]
    base: PscConfig
    trials: int = 1
    modes: Sequence[str] = ('pinv',)
    baselines: Sequence[str] = field(default_factory=baseline_names)
    peak: float = 1.0
    n_avg: int = 16
    s: Optional[int] = None


@dataclass
class SweepRow:
    rate_bpp: float
    r: int
    mode: str
    mean_psnr: float
    std_psnr: float
    mean_mse: float
    wall_time: float

    def as_dict(self) -> Dict[str, Union[str, float, int]]:
        return {
            'rate_bpp': f"{self.rate_bpp:g}",
            'r': self.r,
            'mode': self.mode,
            'mean_psnr': f"{self.mean_psnr:.6f}",
            'std_psnr': f"{self.std_psnr:.6f}",
            'mean_mse': f"{self.mean_mse:.9g}",
            'wall_time': f"{self.wall_time:.3f}",
        }


# (method label, mse, seconds) for each method of one trial
TrialResult = List[Tuple[str, float, float]]


def _run_trial(x: np.ndarray, prior: PriorModel, cfg: PscConfig, spec: SweepSpec) -> TrialResult:
    results: TrialResult = []
    start = time.perf_counter()
    encoded = psc_encode(x, prior, cfg)
    encode_time = time.perf_counter() - start
    for mode in spec.modes:
        start = time.perf_counter()
        x_hat = restore(mode, encoded.rows, encoded.measurements, prior, cfg, spec.n_avg)
        elapsed = encode_time + time.perf_counter() - start
        results.append((f"psc-{mode}", mse(x, x_hat.reshape(x.shape)), elapsed))

    k = cfg.total_measurements
    for name in spec.baselines:
        rows = baseline_rows(name, prior, k, cfg.seed)
        for mode in spec.modes:
            start = time.perf_counter()
            coded = fixed_transform_code(x, rows, prior, cfg, mode, spec.n_avg)
            results.append((f"{name}-{mode}", mse(x, coded.signal), time.perf_counter() - start))
    return results


def _summarize(rate: float, r: int, trials: List[TrialResult], peak: float) -> List[SweepRow]:
    rows = []
    for m, (label, _, _) in enumerate(trials[0]):
        errors = np.array([t[m][1] for t in trials])
        psnrs = np.array([psnr_from_mse(e, peak) for e in errors])
        rows.append(SweepRow(
            rate_bpp=rate,
            r=r,
            mode=label,
            mean_psnr=float(np.mean(psnrs)),
            std_psnr=float(np.std(psnrs)),
            mean_mse=float(np.mean(errors)),
            wall_time=float(sum(t[m][2] for t in trials)),
        ))
    return rows


def run_sweep(prior: PriorModel, spec: SweepSpec, threads: Optional[int] = None) -> List[SweepRow]:
    """
    Run every (rate, r) point of the sweep.

    Trials of one point may run concurrently; each trial is an independent
    encode with its own signal, so results do not depend on the worker count.
    """
    if spec.trials < 1:
        raise ConfigInvalid(f"trials must be at least 1, got {spec.trials}")
    if spec.base.dim != prior.dim:
        raise ConfigInvalid(f"shape {spec.base.shape} does not hold the prior dimension {prior.dim}")
    signals = draw_source_signals(prior, spec.trials, spec.base.seed).reshape((spec.trials,) + spec.base.shape)
    threads = worker_count() if threads is None else threads
    out: List[SweepRow] = []
    for rate in spec.rates:
        for r in spec.ranks:
            n_iter = iterations_for_bpp(rate, spec.base.shape, r)
            cfg = replace(spec.base, n_iter=n_iter, r=r, s=spec.s)
            cfg.validate()
            logger.info(f"sweep point: {rate:g} bpp, r = {r}, N = {n_iter}")

            def trial(i: int) -> TrialResult:
                return _run_trial(signals[i], prior, cfg, spec)

            if threads <= 1 or spec.trials <= 1:
                trials = [trial(i) for i in range(spec.trials)]
            else:
                with concurrent.futures.ThreadPoolExecutor(max_workers=min(threads, spec.trials)) as ex:
                    trials = list(ex.map(trial, range(spec.trials)))
            out.extend(_summarize(rate, r, trials, spec.peak))
    return out


def write_csv(path: Union[str, Path], rows: Sequence[SweepRow]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=CSV_FIELDS, lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow(row.as_dict())
