"""Distortion metrics."""

import math

import numpy as np

from src.utils.errors import ShapeMismatch


def mse(original: np.ndarray, reconstruction: np.ndarray) -> float:
    """Mean squared error, accumulated in float64 in row-major order."""
    a = np.asarray(original, dtype=np.float64)
    b = np.asarray(reconstruction, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    diff = (a - b).reshape(-1)
    return float(np.dot(diff, diff) / diff.size)


def psnr_from_mse(error: float, peak: float = 1.0) -> float:
    """10·log10(peak² / MSE); infinite for a perfect reconstruction."""
    if error <= 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / error)


def psnr(original: np.ndarray, reconstruction: np.ndarray, peak: float = 1.0) -> float:
    return psnr_from_mse(mse(original, reconstruction), peak)


def format_psnr(value: float) -> str:
    return 'inf' if math.isinf(value) else f"{value:.4f}"
