"""Environment knobs shared by the library and the CLI."""

import os

from src.utils.errors import ConfigInvalid

THREADS_ENV = 'PSC_THREADS'


def worker_count(default: int = 1) -> int:
    """Worker threads allowed for sample batches and sweep trials (PSC_THREADS)."""
    raw = os.environ.get(THREADS_ENV, '').strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigInvalid(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigInvalid(f"{THREADS_ENV} must be at least 1, got {value}")
    return value
