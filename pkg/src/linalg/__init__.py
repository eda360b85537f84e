# Linear algebra package
from src.linalg.dense import (
    apply_sign_convention,
    empty_rows,
    orthonormality_error,
    orthonormalize_against,
    project_complement,
    sym_eig_desc,
    top_r_right_singular_vectors,
)

__all__ = [
    'apply_sign_convention',
    'empty_rows',
    'orthonormality_error',
    'orthonormalize_against',
    'project_complement',
    'sym_eig_desc',
    'top_r_right_singular_vectors',
]
