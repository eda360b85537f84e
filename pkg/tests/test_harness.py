"""
Tests for the evaluation harness: signal files, metrics, sweeps and the
embedded self-test.
"""

import csv
import math
import shutil
import struct
import tempfile
from pathlib import Path

import numpy as np
import pytest

from src.codec import PscConfig
from src.harness import (
    CSV_FIELDS,
    CheckResult,
    SignalFile,
    SweepSpec,
    check_names,
    format_psnr,
    mse,
    psnr,
    psnr_from_mse,
    read_signal,
    run_selftest,
    run_sweep,
    write_csv,
    write_signal,
)
from src.priors import GaussianPrior, load_prior
from src.sampler import SamplerConfig
from src.utils.errors import ConfigInvalid, ShapeMismatch, SignalFormatError

CONFIG_DIR = Path(__file__).resolve().parent.parent / 'configs'


def ladder_prior(dim=8):
    return GaussianPrior(np.zeros(dim), np.diag(0.5 ** np.arange(dim)))


def sweep_spec(**overrides):
    params = dict(
        rates=[2.0],
        ranks=[2],
        base=PscConfig(shape=(8,), n_iter=0, r=2, sampler=SamplerConfig(steps=4), seed=1, threads=1),
        trials=2,
    )
    params.update(overrides)
    return SweepSpec(**params)


class TestSignalFile:
    """The binary signal container."""

    def setup_method(self):
        self.temp_dir = Path(tempfile.mkdtemp())

    def teardown_method(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_round_trip(self):
        """Shape, peak and float32 data survive a write and read."""
        data = np.arange(12, dtype=np.float64).reshape(3, 4) / 7.0
        path = self.temp_dir / 'x.sig'
        write_signal(path, SignalFile(data, peak=255.0))
        loaded = read_signal(path)
        assert loaded.shape == (3, 4)
        assert loaded.peak == 255.0
        assert np.array_equal(loaded.data, data.astype(np.float32).astype(np.float64))

    def test_layout(self):
        """Magic, ndim, dims, peak, then little-endian float32 samples."""
        raw = SignalFile(np.array([1.0, 2.0]), peak=1.0).to_bytes()
        assert raw[:4] == b'PSCR'
        assert raw[4] == 1
        assert struct.unpack_from('<I', raw, 5)[0] == 2
        assert struct.unpack_from('<f', raw, 9)[0] == 1.0
        assert len(raw) == 4 + 1 + 4 + 4 + 8

    def test_missing_file(self):
        """A missing file is a format error naming the path."""
        with pytest.raises(SignalFormatError, match='not found'):
            read_signal(self.temp_dir / 'absent.sig')

    def test_bad_magic(self):
        """Foreign files are rejected."""
        raw = b'XXXX' + SignalFile(np.zeros(2)).to_bytes()[4:]
        with pytest.raises(SignalFormatError, match='magic'):
            SignalFile.from_bytes(raw)

    def test_too_short(self):
        """A file shorter than the prefix is rejected."""
        with pytest.raises(SignalFormatError):
            SignalFile.from_bytes(b'PS')

    def test_zero_dimensions(self):
        """ndim = 0 is not a signal."""
        with pytest.raises(SignalFormatError):
            SignalFile.from_bytes(b'PSCR\x00' + struct.pack('<f', 1.0))

    def test_truncated_data(self):
        """Missing samples are reported."""
        raw = SignalFile(np.zeros(4)).to_bytes()
        with pytest.raises(SignalFormatError, match='needs'):
            SignalFile.from_bytes(raw[:-1])

    def test_trailing_data(self):
        """Extra bytes are reported too."""
        raw = SignalFile(np.zeros(4)).to_bytes()
        with pytest.raises(SignalFormatError):
            SignalFile.from_bytes(raw + b'\x00\x00\x00\x00')

    def test_non_finite(self):
        """NaN samples are rejected."""
        raw = SignalFile(np.array([1.0, np.nan])).to_bytes()
        with pytest.raises(SignalFormatError, match='NaN'):
            SignalFile.from_bytes(raw)

    def test_bad_peak(self):
        """The peak must be positive."""
        raw = SignalFile(np.zeros(2), peak=0.0).to_bytes()
        with pytest.raises(SignalFormatError, match='peak'):
            SignalFile.from_bytes(raw)


class TestMetrics:
    """MSE and PSNR."""

    def test_mse(self):
        """Mean of squared differences."""
        assert mse(np.zeros(4), np.array([1.0, -1.0, 2.0, 0.0])) == pytest.approx(1.5)

    def test_shape_mismatch(self):
        """Shapes must agree exactly."""
        with pytest.raises(ShapeMismatch):
            mse(np.zeros((2, 2)), np.zeros(4))

    def test_identical_is_infinite(self):
        """A perfect reconstruction has infinite PSNR."""
        x = np.linspace(0.0, 1.0, 10)
        assert psnr(x, x) == math.inf
        assert format_psnr(psnr(x, x)) == 'inf'

    def test_constant_offset(self):
        """An offset of 0.1 at peak 1 is 20 dB."""
        x = np.zeros(16)
        assert psnr(x, x + 0.1) == pytest.approx(20.0)
        assert format_psnr(20.0) == '20.0000'

    def test_peak(self):
        """PSNR scales with the peak value."""
        assert psnr_from_mse(1.0, peak=10.0) == pytest.approx(20.0)


class TestSweep:
    """Rate-distortion sweeps."""

    def setup_method(self):
        self.temp_dir = Path(tempfile.mkdtemp())

    def teardown_method(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_rows_per_point(self):
        """One row per method: PSC and each baseline, per restoration mode."""
        rows = run_sweep(ladder_prior(), sweep_spec(), threads=1)
        assert [row.mode for row in rows] == ['psc-pinv', 'klt-pinv', 'random-pinv']
        assert all(row.rate_bpp == 2.0 and row.r == 2 for row in rows)
        assert all(np.isfinite(row.mean_psnr) for row in rows)

    def test_several_modes(self):
        """Every requested mode is applied to PSC and the baselines."""
        rows = run_sweep(ladder_prior(), sweep_spec(modes=('pinv', 'sample'), baselines=('klt',)), threads=1)
        assert [row.mode for row in rows] == ['psc-pinv', 'psc-sample', 'klt-pinv', 'klt-sample']

    def test_thread_count_does_not_matter(self):
        """Concurrent trials give the same distortion figures."""
        a = run_sweep(ladder_prior(), sweep_spec(trials=3), threads=1)
        b = run_sweep(ladder_prior(), sweep_spec(trials=3), threads=3)
        assert [row.mean_mse for row in a] == [row.mean_mse for row in b]

    def test_more_rate_less_distortion(self):
        """PSC distortion drops as the rate grows."""
        rows = run_sweep(ladder_prior(), sweep_spec(rates=[2.0, 6.0], baselines=()), threads=1)
        assert rows[1].mean_mse < rows[0].mean_mse

    def test_invalid_trials(self):
        """At least one trial per point."""
        with pytest.raises(ConfigInvalid):
            run_sweep(ladder_prior(), sweep_spec(trials=0))

    def test_shape_must_hold_prior(self):
        """The template shape must hold D values."""
        spec = sweep_spec(base=PscConfig(shape=(4,), n_iter=0, r=2))
        with pytest.raises(ConfigInvalid):
            run_sweep(ladder_prior(), spec)

    def test_sample_count_reaches_every_point(self):
        """The sweep's s overrides the per-r default; s = r is rejected."""
        with pytest.raises(ConfigInvalid):
            run_sweep(ladder_prior(), sweep_spec(s=2), threads=1)
        rows = run_sweep(ladder_prior(), sweep_spec(s=6, baselines=()), threads=1)
        assert [row.mode for row in rows] == ['psc-pinv']

    @pytest.mark.parametrize('r', [1, 2])
    def test_exact_mode_matches_klt_on_gaussian(self, r):
        """exact-cov PSC on a Gaussian source is within 5% of the KLT baseline."""
        base = PscConfig(shape=(8,), n_iter=0, r=r, selection_mode='exact-cov', sampler_id='exact',
                         seed=4, threads=1)
        spec = sweep_spec(rates=[4.0], ranks=[r], base=base, trials=20, baselines=('klt',))
        psc, klt = run_sweep(ladder_prior(), spec, threads=1)
        assert (psc.mode, klt.mode) == ('psc-pinv', 'klt-pinv')
        assert psc.mean_mse == pytest.approx(klt.mean_mse, rel=0.05)

    def test_adaptive_rows_beat_klt_on_mixture(self):
        """Split mixture, four measurements: PSC has lower mean MSE than the KLT."""
        prior = load_prior(CONFIG_DIR / 'gmm32.prior')
        base = PscConfig(shape=(32,), n_iter=0, r=1, sampler_id='exact-gmm', seed=2, threads=1)
        spec = sweep_spec(rates=[1.0], ranks=[1], base=base, trials=40, baselines=('klt',), s=64)
        psc, klt = run_sweep(prior, spec, threads=1)
        assert (psc.mode, klt.mode) == ('psc-pinv', 'klt-pinv')
        assert psc.mean_mse < klt.mean_mse

    def test_write_csv(self):
        """The CSV has the fixed header and one line per row."""
        rows = run_sweep(ladder_prior(), sweep_spec(trials=1), threads=1)
        path = self.temp_dir / 'out' / 'rd.csv'
        write_csv(path, rows)
        with path.open(newline='') as f:
            reader = csv.DictReader(f)
            assert reader.fieldnames == CSV_FIELDS
            records = list(reader)
        assert len(records) == len(rows)
        assert records[0]['mode'] == 'psc-pinv'
        assert float(records[0]['rate_bpp']) == 2.0


class TestSelftest:
    """The embedded invariant suite."""

    def test_all_checks_pass(self):
        """Every registered check passes."""
        results = run_selftest()
        assert [r.name for r in results] == check_names()
        failed = [r.line() for r in results if not r.passed]
        assert failed == []

    def test_check_names(self):
        """The suite covers the quantizer, the coder and codec synchrony."""
        assert set(check_names()) >= {'e4m3-table', 'e4m3-idempotence', 'range-roundtrip',
                                      'sync-gaussian', 'sync-gmm'}

    def test_result_lines(self):
        """Report lines are PASS name or FAIL name: detail."""
        assert CheckResult('a', True).line() == 'PASS a'
        assert CheckResult('b', False, 'boom').line() == 'FAIL b: boom'


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
