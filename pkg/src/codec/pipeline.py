"""
PSC encoder and decoder.

The encoder measures the signal through rows it selects itself; the decoder
rebuilds the same rows from the prior, the header and the codes it has read
so far. Nothing about the transform is transmitted.
"""

import zlib
from dataclasses import dataclass
from typing import Iterator, Optional, Union

import numpy as np

from src.codec.bitstream import Bitstream, StreamHeader
from src.codec.config import PscConfig
from src.codec.restore import DEFAULT_AVERAGE, restore
from src.codec.session import CodecSession, transform_digest
from src.entropy import ENTROPY_CODERS, range_decode, range_encode
from src.priors.interface import PriorModel
from src.quant import QUANTIZERS, is_valid_code
from src.sampler import SamplerConfig, sampler_registry
from src.selection import SelectionMode
from src.utils.errors import ConfigInvalid, CorruptStream, NonFiniteInput, PriorMismatch, UnknownSamplerId
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class EncodeResult:
    """
    Encoder output.

    Attributes:
        bitstream: the compressed stream; None when quantization was bypassed.
        rows: H as built by the encoder, kept for audit.
        measurements: the values the encoder conditioned on.
    """
    bitstream: Optional[Bitstream]
    rows: np.ndarray
    measurements: np.ndarray

    @property
    def digest(self) -> str:
        return transform_digest(self.rows)


@dataclass
class DecodeResult:
    """Decoder output together with the rebuilt transform."""
    signal: np.ndarray
    rows: np.ndarray
    measurements: np.ndarray
    config: PscConfig

    @property
    def digest(self) -> str:
        return transform_digest(self.rows)

    @property
    def iterations(self) -> int:
        return self.rows.shape[0] // self.config.r


def header_for(cfg: PscConfig, prior: PriorModel, payload: bytes) -> StreamHeader:
    return StreamHeader(
        shape=cfg.shape,
        n_iter=cfg.n_iter,
        r=cfg.r,
        s=cfg.s,
        sampler_code=sampler_registry.code_of(cfg.sampler_id),
        selection_code=cfg.mode.value,
        eta=cfg.sampler.eta,
        eta_b=cfg.sampler.eta_b,
        steps=cfg.sampler.steps,
        seed=cfg.seed,
        quantizer_code=QUANTIZERS[cfg.quantizer_id],
        entropy_code=ENTROPY_CODERS[cfg.entropy_id],
        prescale=cfg.prescale,
        prior_digest=prior.digest(),
        symbol_count=cfg.total_measurements,
        payload_length=len(payload),
        payload_crc=zlib.crc32(payload),
    )


def _lookup(table: dict, code: int, what: str) -> str:
    for name, value in table.items():
        if value == code:
            return name
    raise CorruptStream(f"unknown {what} code {code} in header")


def config_from_header(header: StreamHeader) -> PscConfig:
    """Rebuild the encoder's configuration from a stream header."""
    try:
        sampler_id = sampler_registry.id_for_code(header.sampler_code)
        mode = SelectionMode(header.selection_code)
    except (UnknownSamplerId, ValueError) as e:
        raise CorruptStream(f"invalid header: {e}") from e
    cfg = PscConfig(
        shape=header.shape,
        n_iter=header.n_iter,
        r=header.r,
        s=header.s,
        sampler_id=sampler_id,
        selection_mode=mode.label,
        sampler=SamplerConfig(steps=header.steps, eta=header.eta, eta_b=header.eta_b),
        seed=header.seed,
        quantizer_id=_lookup(QUANTIZERS, header.quantizer_code, 'quantizer'),
        entropy_id=_lookup(ENTROPY_CODERS, header.entropy_code, 'entropy coder'),
        prescale=header.prescale,
    )
    try:
        cfg.validate()
    except ConfigInvalid as e:
        raise CorruptStream(f"invalid header: {e}") from e
    if header.symbol_count != cfg.total_measurements:
        raise CorruptStream(f"header symbol count {header.symbol_count} != N·r = {cfg.total_measurements}")
    return cfg


def psc_encode(x: np.ndarray, prior: PriorModel, cfg: PscConfig, quantize: bool = True) -> EncodeResult:
    """
    Encode one signal.

    Args:
        x: signal with cfg.dim entries (any shape; flattened row-major).
        prior: prior shared with the decoder.
        cfg: codec configuration.
        quantize: False bypasses quantization and produces no bitstream;
            the loop then conditions on exact measurements (test hook).

    Raises:
        ConfigInvalid: configuration or dimensions are inconsistent.
        NonFiniteInput: x contains NaN or infinity.
    """
    cfg.validate()
    flat = np.asarray(x, dtype=np.float64).reshape(-1)
    if flat.size != cfg.dim or prior.dim != cfg.dim:
        raise ConfigInvalid(f"signal has {flat.size} entries, prior {prior.dim}, shape {cfg.shape}")
    if not np.all(np.isfinite(flat)):
        raise NonFiniteInput("signal contains NaN or infinite values")

    session = CodecSession(prior, cfg, quantized=quantize)

    def measure(iteration: int, new_rows: np.ndarray) -> None:
        session.record.add_measurements(cfg.prescale * (new_rows @ flat))

    session.run(measure)
    values = session.record.values
    if not quantize:
        return EncodeResult(None, session.rows, values)

    payload = range_encode(bytes(session.record.codes))
    stream = Bitstream.from_bytes(header_for(cfg, prior, payload).pack() + payload)
    logger.info(f"Encoded {cfg.total_measurements} measurements into {len(stream)} bytes "
                f"(H digest {session.digest()})")
    return EncodeResult(stream, session.rows, values)


def _open(stream: Union[Bitstream, bytes], prior: PriorModel) -> Bitstream:
    b = stream if isinstance(stream, Bitstream) else Bitstream.from_bytes(stream)
    if prior.digest() != b.header.prior_digest:
        raise PriorMismatch(f"stream was encoded with prior {b.header.prior_digest:016x}, "
                            f"supplied prior is {prior.digest():016x}")
    return b


def _read_codes(b: Bitstream, count: int) -> bytes:
    codes = range_decode(b.payload, count)
    for i, c in enumerate(codes):
        if not is_valid_code(c):
            raise CorruptStream(f"measurement {i} decoded to reserved code 0x{c:02X}")
    return codes


def _replay(b: Bitstream, prior: PriorModel, k: int):
    cfg = config_from_header(b.header)
    if prior.dim != cfg.dim:
        raise PriorMismatch(f"prior dimension {prior.dim} does not match stream dimension {cfg.dim}")
    codes = _read_codes(b, k)
    session = CodecSession(prior, cfg)

    def measure(iteration: int, new_rows: np.ndarray) -> None:
        session.record.add_codes(codes[iteration * cfg.r:(iteration + 1) * cfg.r])

    return cfg, session, measure


def psc_decode(stream: Union[Bitstream, bytes], prior: PriorModel, mode: str = 'pinv',
               k_prefix: Optional[int] = None, n_avg: int = DEFAULT_AVERAGE) -> DecodeResult:
    """
    Decode a stream, optionally only its first k_prefix measurements.

    Raises:
        ChecksumMismatch: header or payload CRC fails.
        PriorMismatch: prior digest differs from the one in the header.
        CorruptStream: malformed header or payload.
        ConfigInvalid: k_prefix out of range or not a multiple of r.
    """
    b = _open(stream, prior)
    total = b.header.symbol_count
    k = total if k_prefix is None else int(k_prefix)
    if not 0 <= k <= total or (b.header.r and k % b.header.r):
        raise ConfigInvalid(f"prefix {k} must be a multiple of r = {b.header.r} in [0, {total}]")

    cfg, session, measure = _replay(b, prior, k)
    session.run(measure, k // cfg.r)
    values = session.record.values
    signal = restore(mode, session.rows, values, prior, cfg, n_avg).reshape(cfg.shape)
    logger.info(f"Decoded {k}/{total} measurements (H digest {session.digest()})")
    return DecodeResult(signal, session.rows, values, cfg)


def decode_progressive(stream: Union[Bitstream, bytes], prior: PriorModel, step: int = 1,
                       mode: str = 'pinv', n_avg: int = DEFAULT_AVERAGE) -> Iterator[DecodeResult]:
    """
    Yield a reconstruction after every `step` iterations (and after the last).

    A single replay serves every reconstruction; each one equals psc_decode
    with the matching k_prefix.
    """
    if step < 1:
        raise ConfigInvalid(f"step must be at least 1, got {step}")
    b = _open(stream, prior)
    cfg, session, measure = _replay(b, prior, b.header.symbol_count)
    for done in range(1, cfg.n_iter + 1):
        session.step(measure)
        if done % step == 0 or done == cfg.n_iter:
            values = session.record.values
            signal = restore(mode, session.rows, values, prior, cfg, n_avg).reshape(cfg.shape)
            yield DecodeResult(signal, session.rows.copy(), values, cfg)
