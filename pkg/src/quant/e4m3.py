"""
float8 e4m3, finite-only variant.

Bit layout: s eeee mmm, exponent bias 7.
    exponent 0:       subnormal, value = m * 2^-9
    exponent 1..15:   normal, value = (1 + m/8) * 2^(e-7)
    s 1111 111:       reserved (invalid)
Largest finite value is 448 (0x7E). Code 0x80 (negative zero) is never
produced and is rejected on input, so every accepted code is canonical.
"""

import math
from typing import Iterable

import numpy as np

from src.utils.errors import InvalidCode, NonFiniteInput

MAX_FINITE = 448.0
MAX_CODE = 0x7E
SIGN_BIT = 0x80
EXP_BIAS = 7
MANT_BITS = 3
MIN_NORMAL = 2.0 ** -6
SUBNORMAL_STEP = 2.0 ** -9
NEGATIVE_ZERO = 0x80


def is_valid_code(code: int) -> bool:
    return 0 <= code <= 0xFF and (code & 0x7F) != 0x7F and code != NEGATIVE_ZERO


def quantize_e4m3(value: float) -> int:
    """
    Round a finite real to the nearest e4m3 code, ties to even.

    Magnitudes of 448 and above clamp to ±448; -0 becomes +0.

    Raises:
        NonFiniteInput: value is NaN or infinite.
    """
    v = float(value)
    if not math.isfinite(v):
        raise NonFiniteInput(f"cannot quantize {v}")
    sign = SIGN_BIT if v < 0.0 else 0
    a = abs(v)

    if a >= MAX_FINITE:
        return sign | MAX_CODE

    if a < MIN_NORMAL:
        # round() on floats is ties-to-even; n == 8 lands exactly on 0x08
        code = round(a / SUBNORMAL_STEP)
    else:
        exponent = math.frexp(a)[1] - 1
        mantissa = round((a / 2.0 ** exponent - 1.0) * 8.0)
        if mantissa == 8:
            exponent += 1
            mantissa = 0
        code = min(((exponent + EXP_BIAS) << MANT_BITS) | mantissa, MAX_CODE)

    return sign | code if code else 0


def dequantize_e4m3(code: int) -> float:
    """
    Exact value of an e4m3 code.

    Raises:
        InvalidCode: reserved pattern, negative zero, or out of byte range.
    """
    code = int(code)
    if not is_valid_code(code):
        raise InvalidCode(f"0x{code:02X} is not a canonical e4m3 code")
    exponent = (code >> MANT_BITS) & 0x0F
    mantissa = code & 0x07
    if exponent == 0:
        magnitude = mantissa * SUBNORMAL_STEP
    else:
        magnitude = (1.0 + mantissa / 8.0) * 2.0 ** (exponent - EXP_BIAS)
    return -magnitude if code & SIGN_BIT else magnitude


def _build_table() -> np.ndarray:
    table = np.full(256, np.nan)
    for c in range(256):
        if is_valid_code(c):
            table[c] = dequantize_e4m3(c)
    return table


DEQUANT_TABLE = _build_table()


def canonical_codes() -> Iterable[int]:
    """Every accepted code, ascending."""
    return (c for c in range(256) if is_valid_code(c))


def quantize_array(values: np.ndarray) -> np.ndarray:
    """
    Vectorised quantize_e4m3 returning uint8 codes.

    Raises:
        NonFiniteInput: any element is NaN or infinite.
    """
    flat = np.asarray(values, dtype=np.float64).reshape(-1)
    finite = np.isfinite(flat)
    if not np.all(finite):
        raise NonFiniteInput(f"cannot quantize {flat[np.argmin(finite)]}")
    a = np.abs(flat)

    subnormal = np.rint(a / SUBNORMAL_STEP).astype(np.int64)

    frac, exp2 = np.frexp(a)
    exponent = exp2.astype(np.int64) - 1
    mantissa = np.rint((2.0 * frac - 1.0) * 8.0).astype(np.int64)
    carry = mantissa == 8
    exponent = exponent + carry
    mantissa = np.where(carry, 0, mantissa)
    normal = np.minimum(((exponent + EXP_BIAS) << MANT_BITS) | mantissa, MAX_CODE)

    code = np.where(a < MIN_NORMAL, subnormal, normal)
    code = np.where(a >= MAX_FINITE, MAX_CODE, code)
    sign = np.where(flat < 0.0, SIGN_BIT, 0)
    return np.where(code == 0, 0, sign | code).astype(np.uint8)


def dequantize_array(codes: np.ndarray) -> np.ndarray:
    """Element-wise dequantize_e4m3 through the lookup table."""
    codes = np.asarray(codes, dtype=np.uint8).reshape(-1)
    out = DEQUANT_TABLE[codes]
    bad = np.isnan(out)
    if np.any(bad):
        raise InvalidCode(f"0x{int(codes[np.argmax(bad)]):02X} is not a canonical e4m3 code")
    return out
