"""
End-to-end scenarios for the PSC codec.

These run the full encoder and decoder on synthetic sources whose optimal
behaviour is known in closed form, and check the properties the codec is
built around: identical transforms on both sides, KLT recovery for Gaussian
sources, gains from signal-adaptive rows, and progressive decoding.
"""

import math
from pathlib import Path

import numpy as np
import pytest

from src.codec import (
    PscConfig,
    decode_progressive,
    draw_source_signals,
    fixed_transform_code,
    klt_rows,
    psc_decode,
    psc_encode,
    restore_pinv,
)
from src.harness import mse, psnr_from_mse
from src.priors import GaussianPrior, gaussian_posterior_moments, gmm_posterior_mean, load_prior
from src.quant import dequantize_array
from src.sampler import SamplerConfig, ddrm_nl_gaussian_moments

CONFIG_DIR = Path(__file__).resolve().parent.parent.parent / 'configs'

ROUND_TRIPS = 100


def ladder_prior(scale=1.0):
    return GaussianPrior(np.zeros(16), scale * np.diag(2.0 ** -np.arange(16)), name='ladder16')


class TestTransformSynchrony:
    """Decoder rebuilds the encoder's transform for every prior family at the default T."""

    # prior file, N, r
    FAMILIES = {
        'gaussian': ('gaussian16.prior', 4, 2),
        'diagonal': ('diag2.prior', 2, 1),
        'gmm': ('gmm64.prior', 8, 4),
    }

    @pytest.fixture(scope='class')
    def priors(self):
        return {family: load_prior(CONFIG_DIR / name) for family, (name, _, _) in self.FAMILIES.items()}

    @pytest.mark.parametrize('seed', range(ROUND_TRIPS))
    @pytest.mark.parametrize('family', ['gaussian', 'diagonal', 'gmm'])
    def test_round_trip(self, priors, family, seed):
        """Sample-PCA with DDRM-NL: digests and rows agree on every signal."""
        prior = priors[family]
        _, n_iter, r = self.FAMILIES[family]
        cfg = PscConfig(shape=(prior.dim,), n_iter=n_iter, r=r, sampler=SamplerConfig(), seed=seed, threads=1)
        x = draw_source_signals(prior, 1, 1000 + seed)[0]
        encoded = psc_encode(x, prior, cfg)
        decoded = psc_decode(encoded.bitstream.to_bytes(), prior)
        assert decoded.digest == encoded.digest
        assert np.array_equal(decoded.rows, encoded.rows)
        assert np.array_equal(decoded.measurements, encoded.measurements)

    def test_thread_count_does_not_matter(self, priors):
        """The stream does not depend on how many workers drew the samples."""
        prior = priors['gmm']
        x = draw_source_signals(prior, 1, 77)[0]
        streams = []
        for threads in (1, 4):
            cfg = PscConfig(shape=(64,), n_iter=3, r=4, sampler=SamplerConfig(steps=6), seed=5, threads=threads)
            streams.append(psc_encode(x, prior, cfg).bitstream.to_bytes())
        assert streams[0] == streams[1]


class TestKltEquivalence:
    """exact-cov selection on a Gaussian source is the KLT."""

    def test_rows_are_prior_eigenvectors(self):
        """With quantization bypassed the rows are e_0, e_1, ... in order."""
        prior = ladder_prior()
        cfg = PscConfig(shape=(16,), n_iter=8, r=1, selection_mode='exact-cov', sampler_id='exact')
        x = draw_source_signals(prior, 1, 3)[0]
        rows = psc_encode(x, prior, cfg, quantize=False).rows
        eigvecs = klt_rows(prior, 8)
        dots = np.abs(np.sum(rows * eigvecs, axis=1))
        assert np.all(dots >= 0.999)

    def test_rows_do_not_depend_on_signal(self):
        """For a Gaussian source the exact-cov transform is the same for every signal."""
        prior = ladder_prior()
        cfg = PscConfig(shape=(16,), n_iter=4, r=2, selection_mode='exact-cov', sampler_id='exact')
        signals = draw_source_signals(prior, 4, 8)
        digests = {psc_encode(x, prior, cfg).digest for x in signals}
        assert len(digests) == 1

    @pytest.mark.parametrize('k', [1, 2, 4, 8])
    def test_pinv_error_is_tail_energy(self, k):
        """Per-signal squared error of pinv is Σ_{i ≥ k} λ_i within 5%."""
        prior = ladder_prior()
        cfg = PscConfig(shape=(16,), n_iter=k, r=1, selection_mode='exact-cov', sampler_id='exact')
        signals = draw_source_signals(prior, 4000, 21)
        rows = psc_encode(signals[0], prior, cfg, quantize=False).rows
        residual = signals - (signals @ rows.T) @ rows
        per_signal = np.mean(np.sum(residual * residual, axis=1))
        tail = float(np.sum(2.0 ** -np.arange(k, 16)))
        assert abs(per_signal - tail) <= 0.05 * tail
        y = rows @ signals[1]
        assert mse(signals[1], restore_pinv(rows, y)) == pytest.approx(
            float(residual[1] @ residual[1]) / 16, rel=1e-9, abs=1e-15)


class TestAdaptivityGain:
    """Signal-adaptive rows beat the best fixed transform on a split mixture."""

    TRIALS = 200

    def test_beats_mixture_klt(self):
        """k = 4: PSC posterior-mean MSE is at least 10% below the mixture KLT."""
        prior = load_prior(CONFIG_DIR / 'gmm32.prior')
        cfg = PscConfig(shape=(32,), n_iter=4, r=1, s=64, sampler_id='exact-gmm', seed=2, threads=1)
        fixed = klt_rows(prior, 4)
        signals = draw_source_signals(prior, self.TRIALS, 13)

        psc_errors, klt_errors = [], []
        for x in signals:
            encoded = psc_encode(x, prior, cfg)
            x_psc = gmm_posterior_mean(prior, encoded.rows, encoded.measurements)
            psc_errors.append(mse(x, x_psc))

            coded = fixed_transform_code(x, fixed, prior, cfg)
            y_fixed = dequantize_array(np.frombuffer(coded.codes, dtype=np.uint8))
            klt_errors.append(mse(x, gmm_posterior_mean(prior, fixed, y_fixed)))

        assert np.mean(psc_errors) <= 0.9 * np.mean(klt_errors)


class TestSamplerAgainstClosedForm:
    """DDRM-NL on the two-dimensional Gaussian fixture."""

    PRIOR = GaussianPrior(np.zeros(2), np.diag([4.0, 1.0]))
    H = np.array([[1.0, 0.0]])
    Y = np.array([2.0])

    def test_chain_mean_matches_posterior(self):
        """The closed-form chain mean equals the posterior mean (2, 0)."""
        post_mean, _ = gaussian_posterior_moments(self.PRIOR, self.H, self.Y)
        oracle = ddrm_nl_gaussian_moments(self.PRIOR, self.H, self.Y, SamplerConfig(steps=25))
        assert np.max(np.abs(oracle.mean - post_mean)) < 0.15

    def test_accuracy_does_not_degrade_with_steps(self):
        """Variance error on the unmeasured coordinate shrinks from T = 10 to T = 50."""
        _, post_cov = gaussian_posterior_moments(self.PRIOR, self.H, self.Y)
        errors = []
        for steps in (10, 25, 50):
            oracle = ddrm_nl_gaussian_moments(self.PRIOR, self.H, self.Y, SamplerConfig(steps=steps))
            errors.append(abs(oracle.covariance[1, 1] - post_cov[1, 1]))
        assert errors[0] >= errors[1] >= errors[2]

    def test_variance_ordering_matches_posterior(self):
        """Unmeasured directions keep the posterior's variance ordering."""
        prior = GaussianPrior(np.zeros(3), np.diag([4.0, 2.0, 1.0]))
        rows = np.array([[1.0, 0.0, 0.0]])
        _, post_cov = gaussian_posterior_moments(prior, rows, self.Y)
        oracle = ddrm_nl_gaussian_moments(prior, rows, self.Y, SamplerConfig(steps=25))
        assert post_cov[1, 1] > post_cov[2, 2]
        assert oracle.covariance[1, 1] > oracle.covariance[2, 2] > 0.0
        assert oracle.covariance[1, 1] < post_cov[1, 1]


class TestProgressiveDecode:
    """Prefix decodes on the Gaussian ladder source."""

    SIGNALS = 60

    def test_distortion_non_increasing(self):
        """Mean pinv MSE never grows with the prefix length (1% tolerance)."""
        prior = ladder_prior()
        cfg = PscConfig(shape=(16,), n_iter=16, r=1, selection_mode='exact-cov', sampler_id='exact')
        totals = np.zeros(cfg.n_iter)
        for x in draw_source_signals(prior, self.SIGNALS, 31):
            stream = psc_encode(x, prior, cfg).bitstream
            for step in decode_progressive(stream, prior):
                totals[step.iterations - 1] += mse(x, step.signal)
        means = totals / self.SIGNALS
        assert np.all(means[1:] <= means[:-1] * 1.01)

    def test_prefixes_are_bit_exact(self):
        """Every prefix decode reproduces the encoder's leading rows and values."""
        prior = ladder_prior()
        cfg = PscConfig(shape=(16,), n_iter=6, r=2, sampler=SamplerConfig(steps=6), seed=4, threads=1)
        x = draw_source_signals(prior, 1, 41)[0]
        encoded = psc_encode(x, prior, cfg)
        progressive = list(decode_progressive(encoded.bitstream, prior))
        for n, step in enumerate(progressive, start=1):
            k = n * cfg.r
            prefix = psc_decode(encoded.bitstream, prior, k_prefix=k)
            assert np.array_equal(prefix.rows, encoded.rows[:k])
            assert np.array_equal(prefix.measurements, encoded.measurements[:k])
            assert np.array_equal(prefix.signal, step.signal)


class TestRankAblation:
    """The number of rows per iteration has only a marginal effect."""

    SIGNALS = 40

    def test_rank_ratio(self):
        """16 measurements with r in {1, 2, 4}: max/min mean MSE at most 1.2."""
        prior = ladder_prior()
        signals = draw_source_signals(prior, self.SIGNALS, 51)
        means = []
        for r in (1, 2, 4):
            cfg = PscConfig(shape=(16,), n_iter=16 // r, r=r, selection_mode='exact-cov', sampler_id='exact')
            errors = [mse(x, psc_decode(psc_encode(x, prior, cfg).bitstream, prior).signal) for x in signals]
            means.append(np.mean(errors))
        assert max(means) / min(means) <= 1.2


class TestDistortionBound:
    """Full-rank coding is limited only by the quantizer."""

    def test_full_rank_psnr(self):
        """N·r = D with e4m3 measurements: at least 40 dB at unit peak."""
        prior = ladder_prior(scale=0.25)
        cfg = PscConfig(shape=(4, 4), n_iter=4, r=4, sampler=SamplerConfig(steps=8), seed=6, threads=1)
        errors = []
        for x in draw_source_signals(prior, 20, 61):
            x = x.reshape(cfg.shape)
            decoded = psc_decode(psc_encode(x, prior, cfg).bitstream, prior, mode='pinv')
            errors.append(mse(x, decoded.signal))
        assert psnr_from_mse(float(np.mean(errors)), peak=1.0) >= 40.0
        assert min(psnr_from_mse(e, peak=1.0) for e in errors) >= 35.0
        assert all(math.isfinite(e) for e in errors)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
