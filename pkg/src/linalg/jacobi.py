"""
Cyclic Jacobi eigensolver for small dense symmetric matrices.

The sweep visits pairs (p, q) in row-major order p < q and the loop structure
is fixed, so the result is bit-identical for identical input on one build.
"""

import math

import numpy as np
from numba import njit

OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 100


@njit(cache=True)
def jacobi_kernel(a: np.ndarray, tol: float, max_sweeps: int):
    """
    Diagonalize the symmetric matrix `a` in place of a copy.

    Returns (eigenvalues, eigenvectors as columns, sweeps used). Convergence
    is declared when the off-diagonal Frobenius norm is at most `tol`.
    """
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n)
    sweeps = 0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if math.sqrt(2.0 * off) <= tol:
            break
        sweeps = sweep + 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    evals = np.empty(n)
    for i in range(n):
        evals[i] = a[i, i]
    return evals, v, sweeps
