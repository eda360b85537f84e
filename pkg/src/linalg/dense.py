"""
Deterministic dense linear algebra for row selection and sampling.

Matrices are numpy float64 arrays. A set of orthonormal rows (the sensing
matrix H and every block of rows appended to it) is a k x D array; k = 0 is a
valid, empty transform.

Sign convention: in every returned row the entry of largest magnitude (first
index on ties) is positive. Together with the index-order tie-break on equal
eigenvalues this makes each decomposition unique.
"""

from typing import List, Tuple

import numpy as np

from src.linalg.jacobi import MAX_SWEEPS, OFF_DIAGONAL_TOL, jacobi_kernel
from src.utils.errors import DimensionExhausted, NotSymmetric, RankDeficient
from src.utils.logger import get_logger

logger = get_logger(__name__)

RANK_TOL = 1e-9
SYMMETRY_TOL = 1e-8
RESIDUAL_TOL = 1e-8
FALLBACK_TOL = 1e-3


def empty_rows(dim: int) -> np.ndarray:
    """An empty 0 x dim transform."""
    return np.zeros((0, dim), dtype=np.float64)


def apply_sign_convention(rows: np.ndarray) -> np.ndarray:
    """Flip each row so that its largest-magnitude entry is positive."""
    rows = np.atleast_2d(np.array(rows, dtype=np.float64, copy=True))
    if rows.shape[0] == 0:
        return rows
    pivots = np.argmax(np.abs(rows), axis=1)
    signs = np.where(rows[np.arange(rows.shape[0]), pivots] < 0.0, -1.0, 1.0)
    return rows * signs[:, None]


def orthonormality_error(rows: np.ndarray) -> float:
    """max |R Rᵀ - I| for a block of rows."""
    if rows.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(rows @ rows.T - np.eye(rows.shape[0]))))


def sym_eig_desc(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Args:
        matrix: D x D symmetric matrix.

    Returns:
        (eigenvalues, eigenvectors) with eigenvectors as rows, ordered by
        descending eigenvalue (index order on ties) and sign-normalized.

    Raises:
        NotSymmetric: if max |S - Sᵀ| exceeds 1e-8 * max |S|.
    """
    s = np.asarray(matrix, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {s.shape}")
    n = s.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    scale = float(np.max(np.abs(s)))
    if float(np.max(np.abs(s - s.T))) > SYMMETRY_TOL * scale:
        raise NotSymmetric("matrix is not symmetric within tolerance")
    if scale == 0.0:
        return np.zeros(n), np.eye(n)

    sym = 0.5 * (s + s.T)
    tol = OFF_DIAGONAL_TOL * float(np.linalg.norm(sym))
    evals, vecs, sweeps = jacobi_kernel(sym, tol, MAX_SWEEPS)
    if sweeps >= MAX_SWEEPS:
        logger.warning(f"Jacobi did not converge in {MAX_SWEEPS} sweeps (n={n})")

    order = np.argsort(-evals, kind='stable')
    return evals[order], apply_sign_convention(vecs[:, order].T)


def _modified_gram_schmidt(rows: np.ndarray) -> np.ndarray:
    out = np.array(rows, dtype=np.float64, copy=True)
    for i in range(out.shape[0]):
        for j in range(i):
            out[i] -= (out[j] @ out[i]) * out[j]
        out[i] /= np.linalg.norm(out[i])
    return out


def top_r_right_singular_vectors(matrix: np.ndarray, r: int) -> np.ndarray:
    """
    Top-r right singular vectors of an s x D matrix, largest first.

    Computed through the s x s Gram matrix A Aᵀ, which is cheap when s << D.

    Raises:
        RankDeficient: fewer than r singular values exceed 1e-9 * ||A||_F.
            The exception carries the rows that were resolvable
            (`rank`, `rows`) so the caller can complete them.
    """
    a = np.asarray(matrix, dtype=np.float64)
    s, dim = a.shape
    if r > min(s, dim):
        raise ValueError(f"r={r} exceeds min(s, D)={min(s, dim)}")
    if r == 0:
        return empty_rows(dim)

    tau = RANK_TOL * float(np.linalg.norm(a))
    _, left = sym_eig_desc(a @ a.T)
    # ||u_i A|| rather than sqrt(eigenvalue): Gram roundoff sits at sqrt(eps) * ||A||
    proj = left @ a
    sigma = np.linalg.norm(proj, axis=1)
    above = sigma > tau
    rank = 0 if tau == 0.0 else (len(above) if above.all() else int(np.argmin(above)))
    m = min(rank, r)

    rows = empty_rows(dim)
    if m > 0:
        rows = proj[:m] / sigma[:m, None]
        rows = apply_sign_convention(_modified_gram_schmidt(rows))

    if rank < r:
        raise RankDeficient(f"only {rank} of {r} singular values exceed {tau:.3e}",
                            rank=m, rows=rows)
    return rows


def project_complement(v: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """v - Hᵀ(H v): the component of v orthogonal to the row space of H.

    Works on a single vector (D,) or a batch (n, D).
    """
    v = np.asarray(v, dtype=np.float64)
    if rows.shape[0] == 0:
        return v.copy()
    return v - (v @ rows.T) @ rows


def _residual(v: np.ndarray, rows: np.ndarray, accepted: List[np.ndarray]) -> np.ndarray:
    # classical Gram-Schmidt, applied twice
    for _ in range(2):
        v = project_complement(v, rows)
        for u in accepted:
            v = v - (u @ v) * u
    return v


def _canonical_fallback(rows: np.ndarray, accepted: List[np.ndarray], dim: int) -> np.ndarray:
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = 1.0
        res = _residual(e, rows, accepted)
        norm = float(np.linalg.norm(res))
        if norm >= FALLBACK_TOL:
            return res / norm
    raise DimensionExhausted("no canonical direction left outside the current row space")


def orthonormalize_against(candidates: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """
    Orthonormalize candidate rows against themselves and against H.

    Candidates are processed in order. A candidate whose residual norm falls
    below 1e-8 is replaced by the first canonical basis vector e_j (ascending
    j) whose residual is at least 1e-3, re-orthonormalized.

    Raises:
        DimensionExhausted: k + r > D.
    """
    cand = np.atleast_2d(np.asarray(candidates, dtype=np.float64))
    r, dim = cand.shape
    k = rows.shape[0]
    if k + r > dim:
        raise DimensionExhausted(f"cannot add {r} rows to {k} in dimension {dim}")

    accepted: List[np.ndarray] = []
    for i in range(r):
        c = cand[i]
        norm = float(np.linalg.norm(c))
        v = c / norm if norm > 0.0 else np.zeros(dim)
        v = _residual(v, rows, accepted)
        res_norm = float(np.linalg.norm(v))
        if res_norm < RESIDUAL_TOL:
            logger.debug(f"candidate {i} collapsed (residual {res_norm:.2e}); using canonical fallback")
            v = _canonical_fallback(rows, accepted, dim)
        else:
            v = v / res_norm
        accepted.append(v)

    if not accepted:
        return empty_rows(dim)
    return apply_sign_convention(np.vstack(accepted))
