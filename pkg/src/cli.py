"""
PSC CLI - command-line interface for the codec toolkit.

Commands:
    encode    compress a signal file into a .psc stream
    decode    restore a signal (or a prefix of it) from a .psc stream
    eval      PSNR / MSE between two signal files
    sweep     rate-distortion sweep with fixed-transform baselines, as CSV
    generate  write a synthetic signal drawn from a prior
    selftest  run the embedded invariant suite

Exit codes: 0 success, 1 self-test failure, 2 bad input format, 3 config
error, 4 encode failure, 5 desync or corrupt stream.
"""

import argparse
import math
import sys
from pathlib import Path
from typing import List, Optional

from src.codec import (
    Bitstream,
    PscConfig,
    draw_source_signals,
    iterations_for_bpp,
    measure_bpp,
    psc_decode,
    psc_encode,
    restoration_modes,
)
from src.harness import (
    SignalFile,
    SweepSpec,
    format_psnr,
    mse,
    psnr_from_mse,
    read_signal,
    run_selftest,
    run_sweep,
    write_csv,
    write_signal,
)
from src.priors import load_prior
from src.sampler import DEFAULT_STEPS, SamplerConfig, sampler_registry
from src.utils.errors import (
    ChecksumMismatch,
    ConfigInvalid,
    CorruptStream,
    PriorConfigError,
    PriorMismatch,
    PscError,
    ShapeMismatch,
    SignalFormatError,
    UnknownSamplerId,
)
from src.utils.logger import Colors, get_logger, set_verbosity

logger = get_logger('psc')

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_FORMAT = 2
EXIT_CONFIG = 3
EXIT_ENCODE = 4
EXIT_DESYNC = 5

FORMAT_ERRORS = (SignalFormatError, ShapeMismatch)
CONFIG_ERRORS = (ConfigInvalid, PriorConfigError, UnknownSamplerId)
DESYNC_ERRORS = (CorruptStream, ChecksumMismatch, PriorMismatch)


def parse_list(text: str, kind=float) -> list:
    """'0.25,0.5' -> [0.25, 0.5]."""
    try:
        return [kind(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise ConfigInvalid(f"cannot parse list {text!r}") from None


def parse_shape(text: Optional[str], dim: int) -> tuple:
    """'64x64' or '64,64'; defaults to (dim,)."""
    if not text:
        return (dim,)
    shape = tuple(parse_list(text.replace('x', ','), int))
    if not shape or any(d < 1 for d in shape):
        raise ConfigInvalid(f"invalid shape {text!r}")
    return shape


def config_from_args(args: argparse.Namespace, shape: tuple, n_iter: int = 0) -> PscConfig:
    return PscConfig(
        shape=shape,
        n_iter=n_iter,
        r=args.r,
        s=args.s,
        sampler_id=args.sampler,
        selection_mode=args.selection,
        sampler=SamplerConfig(steps=args.steps, eta=args.eta, eta_b=args.eta_b),
        seed=args.seed,
        prescale=args.prescale,
    )


def cmd_encode(args: argparse.Namespace) -> int:
    """Handle the 'encode' command."""
    try:
        signal = read_signal(args.input)
    except SignalFormatError as e:
        logger.error(f"Bad input signal: {e}")
        return EXIT_FORMAT

    try:
        prior = load_prior(args.prior)
        if args.bpp is not None:
            n_iter = iterations_for_bpp(args.bpp, signal.shape, args.r)
        else:
            n_iter = args.iters
        cfg = config_from_args(args, signal.shape, n_iter)
        cfg.validate()
    except CONFIG_ERRORS as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG

    logger.info(f"{Colors.BOLD}Encoding{Colors.ENDC} {args.input}: shape {cfg.shape}, N = {cfg.n_iter}, r = {cfg.r}")
    try:
        result = psc_encode(signal.data, prior, cfg)
    except CONFIG_ERRORS as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except PscError as e:
        logger.error(f"Encode failed: {e}")
        return EXIT_ENCODE

    Path(args.output).write_bytes(result.bitstream.to_bytes())
    print(f"bpp {measure_bpp(result.bitstream):.6f}")
    print(f"transform {result.digest}")
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    """Handle the 'decode' command."""
    path = Path(args.input)
    if not path.is_file():
        logger.error(f"Stream not found: {path}")
        return EXIT_FORMAT

    try:
        prior = load_prior(args.prior)
    except CONFIG_ERRORS as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG

    try:
        stream = Bitstream.from_bytes(path.read_bytes())
        result = psc_decode(stream, prior, mode=args.mode, k_prefix=args.prefix, n_avg=args.n_avg)
    except DESYNC_ERRORS as e:
        logger.error(f"Cannot decode {path}: {e}")
        return EXIT_DESYNC
    except CONFIG_ERRORS as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except PscError as e:
        logger.error(f"Decode failed: {e}")
        return EXIT_DESYNC

    write_signal(args.output, SignalFile(result.signal, args.peak))
    print(f"transform {result.digest}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    """Handle the 'eval' command."""
    try:
        original = read_signal(args.original)
        reconstruction = read_signal(args.reconstruction)
        error = mse(original.data, reconstruction.data)
    except FORMAT_ERRORS as e:
        logger.error(f"Cannot compare signals: {e}")
        return EXIT_FORMAT

    print(f"psnr {format_psnr(psnr_from_mse(error, original.peak))}")
    print(f"mse {error:.9g}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """Handle the 'sweep' command."""
    try:
        prior = load_prior(args.prior)
        shape = parse_shape(args.shape, prior.dim)
        spec = SweepSpec(
            rates=parse_list(args.rates, float),
            ranks=parse_list(args.ranks, int),
            base=config_from_args(args, shape),
            trials=args.trials,
            modes=parse_list(args.modes, str),
            peak=args.peak,
            n_avg=args.n_avg,
            s=args.s,
        )
        for mode in spec.modes:
            if mode not in restoration_modes():
                raise ConfigInvalid(f"unknown restoration mode {mode!r}")
        rows = run_sweep(prior, spec)
    except CONFIG_ERRORS as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except PscError as e:
        logger.error(f"Sweep failed: {e}")
        return EXIT_ENCODE

    write_csv(args.output, rows)
    logger.info(f"Wrote {len(rows)} row(s) to {args.output}")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    """Handle the 'generate' command - draw a synthetic signal from a prior."""
    try:
        prior = load_prior(args.prior)
        shape = parse_shape(args.shape, prior.dim)
        if math.prod(shape) != prior.dim:
            raise ConfigInvalid(f"shape {shape} does not hold {prior.dim} values")
        if args.index < 0:
            raise ConfigInvalid(f"index must be non-negative, got {args.index}")
    except CONFIG_ERRORS as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG

    x = draw_source_signals(prior, args.index + 1, args.seed)[args.index].reshape(shape)
    write_signal(args.output, SignalFile(x, args.peak))
    logger.info(f"Wrote signal {args.index} (seed {args.seed}) to {args.output}")
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    """Handle the 'selftest' command."""
    results = run_selftest()
    for result in results:
        print(result.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error(f"{Colors.FAIL}Self-test failed: {', '.join(failed)}{Colors.ENDC}")
        return EXIT_SELFTEST
    return EXIT_OK


def add_codec_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--r', type=int, default=12, help='Rows per iteration (default: 12)')
    parser.add_argument('--s', type=int, default=None, help='Posterior samples per iteration')
    parser.add_argument('--seed', type=int, default=0, help='Shared encoder/decoder seed')
    parser.add_argument('--sampler', default='ddrm-nl', choices=sampler_registry.ids(),
                        help='Sampler used for row selection')
    parser.add_argument('--selection', default='sample-pca', choices=['sample-pca', 'exact-cov'],
                        help='Row selection mode')
    parser.add_argument('--steps', type=int, default=DEFAULT_STEPS, help='DDRM steps T')
    parser.add_argument('--eta', type=float, default=1.0, help='Complement-space noise mixing')
    parser.add_argument('--eta-b', type=float, default=1.0, help='Measurement anchoring')
    parser.add_argument('--prescale', type=float, default=1.0, help='Measurement prescale factor')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='psc',
        description='PSC: progressive compression with transforms rebuilt by posterior sampling',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  psc generate --prior configs/gaussian16.prior --output x.sig
  psc encode --input x.sig --prior configs/gaussian16.prior --iters 4 --r 2 --output x.psc
  psc decode --input x.psc --prior configs/gaussian16.prior --mode mean --output x_hat.sig
  psc eval x.sig x_hat.sig
  psc sweep --prior configs/gmm32.prior --rates 0.5,1,2 --ranks 1,2,4 --output rd.csv
        """
    )
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable verbose output')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    encode_parser = subparsers.add_parser('encode', help='Compress a signal file')
    encode_parser.add_argument('--input', '-i', required=True, help='Signal file to compress')
    encode_parser.add_argument('--prior', '-p', required=True, help='Prior definition file')
    encode_parser.add_argument('--output', '-o', required=True, help='Output .psc stream')
    rate = encode_parser.add_mutually_exclusive_group(required=True)
    rate.add_argument('--bpp', type=float, help='Target bits per pixel')
    rate.add_argument('--iters', type=int, help='Number of iterations N')
    add_codec_arguments(encode_parser)
    encode_parser.set_defaults(func=cmd_encode)

    decode_parser = subparsers.add_parser('decode', help='Restore a signal from a stream')
    decode_parser.add_argument('--input', '-i', required=True, help='.psc stream')
    decode_parser.add_argument('--prior', '-p', required=True, help='Prior definition file')
    decode_parser.add_argument('--output', '-o', required=True, help='Output signal file')
    decode_parser.add_argument('--mode', default='pinv', choices=restoration_modes(),
                               help='Restoration mode')
    decode_parser.add_argument('--prefix', type=int, default=None,
                               help='Decode only the first k measurements (multiple of r)')
    decode_parser.add_argument('--n-avg', type=int, default=64, help='Draws averaged by --mode mean')
    decode_parser.add_argument('--peak', type=float, default=1.0, help='Peak value stored in the output')
    decode_parser.set_defaults(func=cmd_decode)

    eval_parser = subparsers.add_parser('eval', help='PSNR between two signal files')
    eval_parser.add_argument('original', help='Reference signal')
    eval_parser.add_argument('reconstruction', help='Reconstructed signal')
    eval_parser.set_defaults(func=cmd_eval)

    sweep_parser = subparsers.add_parser('sweep', help='Rate-distortion sweep to CSV')
    sweep_parser.add_argument('--prior', '-p', required=True, help='Prior definition file')
    sweep_parser.add_argument('--output', '-o', required=True, help='Output CSV')
    sweep_parser.add_argument('--rates', required=True, help='Comma-separated target BPP values')
    sweep_parser.add_argument('--ranks', default='12', help='Comma-separated values of r')
    sweep_parser.add_argument('--trials', type=int, default=10, help='Signals per point')
    sweep_parser.add_argument('--modes', default='pinv', help='Comma-separated restoration modes')
    sweep_parser.add_argument('--shape', default=None, help='Signal shape, e.g. 8x8 (default: flat)')
    sweep_parser.add_argument('--peak', type=float, default=1.0, help='PSNR peak value')
    sweep_parser.add_argument('--n-avg', type=int, default=16, help='Draws averaged by mode mean')
    add_codec_arguments(sweep_parser)
    sweep_parser.set_defaults(func=cmd_sweep)

    generate_parser = subparsers.add_parser('generate', help='Draw a synthetic signal from a prior')
    generate_parser.add_argument('--prior', '-p', required=True, help='Prior definition file')
    generate_parser.add_argument('--output', '-o', required=True, help='Output signal file')
    generate_parser.add_argument('--seed', type=int, default=0, help='Source seed')
    generate_parser.add_argument('--index', type=int, default=0, help='Which draw of the seeded sequence')
    generate_parser.add_argument('--shape', default=None, help='Signal shape (default: flat)')
    generate_parser.add_argument('--peak', type=float, default=1.0, help='Peak value stored in the file')
    generate_parser.set_defaults(func=cmd_generate)

    selftest_parser = subparsers.add_parser('selftest', help='Run the embedded invariant suite')
    selftest_parser.set_defaults(func=cmd_selftest)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)

    set_verbosity(args.verbose)
    if not args.command:
        parser.print_help()
        return EXIT_OK

    return args.func(args)


if __name__ == '__main__':
    sys.exit(main())
