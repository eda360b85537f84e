# Row selection package
from src.selection.rows import (
    SelectionContext,
    SelectionMode,
    default_sample_count,
    posterior_covariance,
    select_new_rows,
    select_new_rows_exact,
)

__all__ = [
    'SelectionContext',
    'SelectionMode',
    'default_sample_count',
    'posterior_covariance',
    'select_new_rows',
    'select_new_rows_exact',
]
