"""
Tests for the psc command-line interface.
"""

import csv
import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from src.cli import (
    EXIT_CONFIG,
    EXIT_DESYNC,
    EXIT_FORMAT,
    EXIT_OK,
    build_parser,
    main,
    parse_list,
    parse_shape,
)
from src.harness import SignalFile, read_signal, write_signal
from src.utils.errors import ConfigInvalid

CONFIG_DIR = Path(__file__).resolve().parent.parent / 'configs'
GAUSSIAN16 = str(CONFIG_DIR / 'gaussian16.prior')
DIAG2 = str(CONFIG_DIR / 'diag2.prior')


class TestArgumentParsing:
    """Helpers and parser wiring."""

    def test_parse_list(self):
        """Comma-separated values, blanks ignored."""
        assert parse_list('0.25, 0.5,') == [0.25, 0.5]
        assert parse_list('1,2,4', int) == [1, 2, 4]
        with pytest.raises(ConfigInvalid):
            parse_list('1,two', int)

    def test_parse_shape(self):
        """Shapes accept 'x' or ',' and default to flat."""
        assert parse_shape('4x4', 16) == (4, 4)
        assert parse_shape('2,8', 16) == (2, 8)
        assert parse_shape(None, 16) == (16,)
        with pytest.raises(ConfigInvalid):
            parse_shape('0x4', 16)

    def test_encode_needs_rate(self):
        """encode requires exactly one of --bpp and --iters."""
        parser = build_parser()
        with pytest.raises(SystemExit):
            parser.parse_args(['encode', '-i', 'x', '-p', 'p', '-o', 'o'])
        with pytest.raises(SystemExit):
            parser.parse_args(['encode', '-i', 'x', '-p', 'p', '-o', 'o', '--bpp', '1', '--iters', '2'])

    def test_no_command(self, capsys):
        """Without a command the help is printed."""
        assert main([]) == EXIT_OK
        assert 'usage' in capsys.readouterr().out


class TestCommands:
    """End-to-end runs through main()."""

    def setup_method(self):
        self.temp_dir = Path(tempfile.mkdtemp())

    def teardown_method(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def path(self, name):
        return str(self.temp_dir / name)

    def generate(self, name='x.sig', shape='4x4'):
        assert main(['generate', '-p', GAUSSIAN16, '-o', self.path(name), '--shape', shape, '--seed', '2']) == EXIT_OK
        return self.path(name)

    def encode(self, signal, stream='x.psc', extra=()):
        argv = ['encode', '-i', signal, '-p', GAUSSIAN16, '-o', self.path(stream),
                '--iters', '4', '--r', '2', '--steps', '6', '--seed', '9', *extra]
        return main(argv)

    def test_generate(self):
        """generate writes a signal of the requested shape."""
        signal = read_signal(self.generate())
        assert signal.shape == (4, 4)

    def test_generate_bad_shape(self):
        """The shape must hold the prior dimension."""
        assert main(['generate', '-p', GAUSSIAN16, '-o', self.path('x.sig'), '--shape', '3x3']) == EXIT_CONFIG

    def test_encode_decode(self, capsys):
        """Encoder and decoder report the same transform digest."""
        signal = self.generate()
        assert self.encode(signal) == EXIT_OK
        enc_out = capsys.readouterr().out
        assert main(['decode', '-i', self.path('x.psc'), '-p', GAUSSIAN16, '-o', self.path('y.sig')]) == EXIT_OK
        dec_out = capsys.readouterr().out

        digest = [line for line in enc_out.splitlines() if line.startswith('transform ')]
        assert digest and digest[0] in dec_out.splitlines()
        assert any(line.startswith('bpp ') for line in enc_out.splitlines())
        assert read_signal(self.path('y.sig')).shape == (4, 4)

    def test_encode_by_bpp(self):
        """--bpp picks N from the rate budget."""
        signal = self.generate()
        argv = ['encode', '-i', signal, '-p', GAUSSIAN16, '-o', self.path('x.psc'),
                '--bpp', '2', '--r', '2', '--steps', '6']
        assert main(argv) == EXIT_OK

    def test_decode_prefix_and_mode(self):
        """Prefix decodes and posterior restoration run from the CLI."""
        signal = self.generate()
        assert self.encode(signal) == EXIT_OK
        argv = ['decode', '-i', self.path('x.psc'), '-p', GAUSSIAN16, '-o', self.path('y.sig'),
                '--prefix', '4', '--mode', 'mean', '--n-avg', '4']
        assert main(argv) == EXIT_OK

    def test_decode_bad_prefix(self):
        """A prefix that is not a multiple of r is a config error."""
        signal = self.generate()
        assert self.encode(signal) == EXIT_OK
        argv = ['decode', '-i', self.path('x.psc'), '-p', GAUSSIAN16, '-o', self.path('y.sig'), '--prefix', '3']
        assert main(argv) == EXIT_CONFIG

    def test_missing_input_signal(self):
        """A missing signal file is a format error."""
        assert self.encode(self.path('absent.sig')) == EXIT_FORMAT

    def test_wrong_signal_size(self):
        """A signal that does not match the prior is a config error."""
        path = self.path('small.sig')
        write_signal(path, SignalFile(np.zeros(8)))
        assert self.encode(path) == EXIT_CONFIG

    def test_bad_prior_file(self):
        """A malformed prior file is a config error."""
        prior = self.temp_dir / 'bad.prior'
        prior.write_text('gaussian { dim: 16 covariance: {} }')
        argv = ['encode', '-i', self.generate(), '-p', str(prior), '-o', self.path('x.psc'), '--iters', '1']
        assert main(argv) == EXIT_CONFIG

    def test_non_utf8_prior_file(self):
        """A prior file that is not UTF-8 text is a config error."""
        prior = self.temp_dir / 'latin1.prior'
        prior.write_bytes(b'\xff\xfegaussian { dim: 16 }')
        assert main(['generate', '-p', str(prior), '-o', self.path('x.sig')]) == EXIT_CONFIG
        assert not Path(self.path('x.sig')).exists()

    @pytest.mark.parametrize('mode', ['pinv', 'mean'])
    def test_prefix_decode_matches_single_iteration(self, mode):
        """decode --prefix r on a 4-iteration stream equals the 1-iteration encode/decode."""
        signal = self.generate()
        common = ['-i', signal, '-p', GAUSSIAN16, '--r', '2', '--steps', '6', '--seed', '9']
        assert main(['encode', *common, '-o', self.path('long.psc'), '--iters', '4']) == EXIT_OK
        assert main(['encode', *common, '-o', self.path('short.psc'), '--iters', '1']) == EXIT_OK

        decode = ['-p', GAUSSIAN16, '--mode', mode, '--n-avg', '4']
        assert main(['decode', '-i', self.path('long.psc'), '-o', self.path('prefix.sig'),
                     '--prefix', '2', *decode]) == EXIT_OK
        assert main(['decode', '-i', self.path('short.psc'), '-o', self.path('full.sig'), *decode]) == EXIT_OK
        prefix = read_signal(self.path('prefix.sig'))
        full = read_signal(self.path('full.sig'))
        assert np.array_equal(prefix.data, full.data)

    def test_missing_stream(self):
        """A missing stream is a format error."""
        argv = ['decode', '-i', self.path('absent.psc'), '-p', GAUSSIAN16, '-o', self.path('y.sig')]
        assert main(argv) == EXIT_FORMAT

    def test_corrupt_stream(self):
        """A tampered stream is a desync and writes no output."""
        signal = self.generate()
        assert self.encode(signal) == EXIT_OK
        stream = Path(self.path('x.psc'))
        data = bytearray(stream.read_bytes())
        data[-2] ^= 0xFF
        stream.write_bytes(bytes(data))
        argv = ['decode', '-i', str(stream), '-p', GAUSSIAN16, '-o', self.path('y.sig')]
        assert main(argv) == EXIT_DESYNC
        assert not Path(self.path('y.sig')).exists()

    def test_wrong_prior_is_desync(self):
        """Decoding with a different prior is refused."""
        signal = self.generate()
        assert self.encode(signal) == EXIT_OK
        other = self.temp_dir / 'other.prior'
        other.write_text('gaussian { dim: 16, covariance: { kind: "identity" } }')
        argv = ['decode', '-i', self.path('x.psc'), '-p', str(other), '-o', self.path('y.sig')]
        assert main(argv) == EXIT_DESYNC

    def test_eval(self, capsys):
        """Identical signals are 'inf'; an offset of 0.1 is 20 dB."""
        a = self.path('a.sig')
        b = self.path('b.sig')
        write_signal(a, SignalFile(np.zeros((4, 4))))
        write_signal(b, SignalFile(np.full((4, 4), 0.1)))
        assert main(['eval', a, a]) == EXIT_OK
        assert 'psnr inf' in capsys.readouterr().out
        assert main(['eval', a, b]) == EXIT_OK
        assert 'psnr 20.0000' in capsys.readouterr().out

    def test_eval_shape_mismatch(self):
        """Signals of different shapes cannot be compared."""
        a = self.path('a.sig')
        b = self.path('b.sig')
        write_signal(a, SignalFile(np.zeros((4, 4))))
        write_signal(b, SignalFile(np.zeros(16)))
        assert main(['eval', a, b]) == EXIT_FORMAT

    def test_sweep(self):
        """sweep writes one CSV row per method and point."""
        out = self.path('rd.csv')
        argv = ['sweep', '-p', GAUSSIAN16, '-o', out, '--rates', '1,2', '--ranks', '2',
                '--trials', '2', '--steps', '4', '--shape', '4x4']
        assert main(argv) == EXIT_OK
        with open(out, newline='') as f:
            records = list(csv.DictReader(f))
        assert len(records) == 2 * 3
        assert {r['mode'] for r in records} == {'psc-pinv', 'klt-pinv', 'random-pinv'}

    def test_sweep_unknown_mode(self):
        """Unknown restoration modes are config errors."""
        argv = ['sweep', '-p', DIAG2, '-o', self.path('rd.csv'), '--rates', '4', '--ranks', '1',
                '--modes', 'median', '--trials', '1']
        assert main(argv) == EXIT_CONFIG

    def test_sweep_sample_count_is_used(self):
        """--s reaches every sweep point: s = r is rejected as a config error."""
        argv = ['sweep', '-p', DIAG2, '-o', self.path('rd.csv'), '--rates', '4', '--ranks', '1',
                '--s', '1', '--trials', '1', '--steps', '4']
        assert main(argv) == EXIT_CONFIG
        argv[argv.index('--s') + 1] = '3'
        assert main(argv) == EXIT_OK

    def test_selftest(self, capsys):
        """selftest passes and prints one PASS line per check."""
        assert main(['selftest']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines and all(line.startswith('PASS ') for line in lines)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
