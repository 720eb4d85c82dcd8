"""Small dense complex linear algebra: scaled partial pivoting throughout.

The interface systems are 3x3 or 3x4 complex; direct elimination with row
scaling plus one step of iterative refinement keeps residuals near machine
precision even for strongly contrasted materials.  No iterative solvers.
"""

from __future__ import annotations

import numpy as np


class SingularMatrixError(np.linalg.LinAlgError):
    pass


def lu_factor(a: np.ndarray):
    """LU with scaled partial pivoting; returns (lu, perm, sign-ish parity)."""
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    scale = np.max(np.abs(a), axis=1)
    if np.any(scale == 0.0):
        raise SingularMatrixError("zero row")
    perm = np.arange(n)
    parity = 1.0
    for k in range(n):
        ratios = np.abs(a[k:, k]) / scale[k:]
        p = k + int(np.argmax(ratios))
        if ratios[p - k] == 0.0:
            raise SingularMatrixError("pivot exhausted")
        if p != k:
            a[[k, p]] = a[[p, k]]
            scale[[k, p]] = scale[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            parity = -parity
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a, perm, parity


def lu_solve(lu, perm, b: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    x = np.asarray(b, dtype=complex)[perm].copy()
    for k in range(1, n):
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - lu[k, k + 1:] @ x[k + 1:]) / lu[k, k]
    return x


def solve(a: np.ndarray, b: np.ndarray, refine: int = 1) -> np.ndarray:
    """Solve a x = b with partial pivoting and iterative refinement."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    lu, perm, _ = lu_factor(a)
    x = lu_solve(lu, perm, b)
    for _ in range(refine):
        r = b - a @ x
        if not np.any(r):
            break
        x = x + lu_solve(lu, perm, r)
    return x


def det(a: np.ndarray) -> complex:
    """Determinant from the pivoted LU factorization."""
    try:
        lu, _, parity = lu_factor(a)
    except SingularMatrixError:
        return 0.0 + 0.0j
    return complex(parity * np.prod(np.diag(lu)))


def rank_row_reduce(a: np.ndarray, rtol: float = 1e-10) -> int:
    """Numeric rank by row reduction with scaled partial pivoting."""
    a = np.array(a, dtype=complex)
    m, n = a.shape
    norm = np.max(np.abs(a))
    if norm == 0.0:
        return 0
    rank = 0
    row = 0
    for col in range(n):
        piv = row + int(np.argmax(np.abs(a[row:, col])))
        if np.abs(a[piv, col]) <= rtol * norm:
            continue
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        a[row + 1:, col:] -= np.outer(a[row + 1:, col] / a[row, col], a[row, col:])
        rank += 1
        row += 1
        if row == m:
            break
    return rank


def minimum_norm_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimum-norm solution of an underdetermined full-row-rank system.

    Uses x = A^H (A A^H)^-1 b with the pivoted solver on the small Gram
    matrix; raises SingularMatrixError when the rows are dependent.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    gram = a @ a.conj().T
    y = solve(gram, b)
    return a.conj().T @ y
