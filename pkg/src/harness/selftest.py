"""
Embedded invariant suite behind `psc selftest`.

Checks are small, seeded and timing-free, so repeated runs print the same
report.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from src.codec import PscConfig, psc_decode, psc_encode
from src.determinism import DomainTag, derive_stream, peek_words
from src.entropy import range_decode, range_encode
from src.priors import GaussianPrior, GmmPrior
from src.quant import canonical_codes, dequantize_e4m3, quantize_e4m3
from src.sampler import SamplerConfig
from src.utils.errors import PscError

Check = Callable[[], None]

_CHECKS: Dict[str, Check] = {}

# value -> code pairs every e4m3 build must reproduce
E4M3_TABLE = [
    (1.0, 0x38),
    (0.25, 0x28),
    (-1.5, 0xBC),
    (448.0, 0x7E),
    (1.0625, 0x38),
    (2.0 ** -9, 0x01),
]


def selftest_check(name: str):
    def decorator(func: Check) -> Check:
        _CHECKS[name] = func
        return func
    return decorator


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ''

    def line(self) -> str:
        return f"PASS {self.name}" if self.passed else f"FAIL {self.name}: {self.detail}"


@selftest_check('e4m3-table')
def check_e4m3_table() -> None:
    for value, code in E4M3_TABLE:
        got = quantize_e4m3(value)
        assert got == code, f"quantize({value}) = 0x{got:02X}, expected 0x{code:02X}"
    assert dequantize_e4m3(0x01) == 2.0 ** -9, "0x01 does not decode to 2^-9"


@selftest_check('e4m3-idempotence')
def check_e4m3_idempotence() -> None:
    for code in canonical_codes():
        again = quantize_e4m3(dequantize_e4m3(code))
        assert again == code, f"code 0x{code:02X} re-quantizes to 0x{again:02X}"


@selftest_check('range-roundtrip')
def check_range_roundtrip() -> None:
    words = peek_words(derive_stream(0, DomainTag.SOURCE, 0, 0), 0, 4096)
    symbols = bytes(int(w) & 0xFF for w in words)
    payload = range_encode(symbols)
    assert range_decode(payload, len(symbols)) == symbols, "full decode differs from input"
    half = len(symbols) // 2
    assert range_decode(payload, half) == symbols[:half], "prefix decode differs from input prefix"
    constant = range_encode(bytes(1000))
    assert len(constant) <= 150, f"constant stream coded to {len(constant)} bytes"


def _sync_roundtrip(prior, cfg: PscConfig) -> None:
    x = prior.draw(derive_stream(cfg.seed, DomainTag.SOURCE, 1, 0), 1)[0]
    encoded = psc_encode(x, prior, cfg)
    decoded = psc_decode(encoded.bitstream.to_bytes(), prior)
    assert decoded.digest == encoded.digest, f"transform digest {decoded.digest} != {encoded.digest}"
    assert np.array_equal(decoded.measurements, encoded.measurements), "measurements differ"


@selftest_check('sync-gaussian')
def check_sync_gaussian() -> None:
    prior = GaussianPrior(np.zeros(8), np.diag(2.0 ** -np.arange(8)))
    cfg = PscConfig(shape=(8,), n_iter=3, r=2, sampler=SamplerConfig(steps=8), seed=7)
    _sync_roundtrip(prior, cfg)


@selftest_check('sync-gmm')
def check_sync_gmm() -> None:
    a = np.diag([4.0, 4.0, 0.1, 0.1, 0.1, 0.1])
    b = np.diag([0.1, 0.1, 4.0, 4.0, 0.1, 0.1])
    prior = GmmPrior([0.5, 0.5], [GaussianPrior(np.zeros(6), a), GaussianPrior(np.ones(6), b)])
    cfg = PscConfig(shape=(6,), n_iter=2, r=2, sampler=SamplerConfig(steps=8), seed=11)
    _sync_roundtrip(prior, cfg)


def check_names() -> List[str]:
    return list(_CHECKS)


def run_selftest() -> List[CheckResult]:
    """Run every registered check in registration order."""
    results = []
    for name, check in _CHECKS.items():
        try:
            check()
            results.append(CheckResult(name, True))
        except (AssertionError, PscError) as e:
            results.append(CheckResult(name, False, str(e)))
    return results
