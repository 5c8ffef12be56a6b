"""Small dense elimination routines: row echelon form, rank, null space, LU solve."""

from __future__ import annotations

import numpy as np

RANK_TOL = 1e-9


def rref(M, tol: float = RANK_TOL, scale: float | None = None):
    """Reduced row echelon form by Gauss-Jordan elimination with partial pivoting.

    Returns ``(R, pivots)``. A column is a pivot column when its best
    remaining entry exceeds ``tol`` times ``scale`` (default: the largest
    magnitude in ``M``, floored at 1).
    Works for real and complex input.
    """
    R = np.array(M, dtype=complex if np.iscomplexobj(M) else float)
    rows, cols = R.shape
    if scale is None:
        scale = max(1.0, float(np.abs(R).max(initial=0.0)))
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[k, c]) <= tol * scale:
            R[r:, c] = 0.0
            continue
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = R[r] / R[r, c]
        others = R[:, c].copy()
        others[r] = 0.0
        R -= np.outer(others, R[r])
        R[:, c] = 0.0
        R[r, c] = 1.0
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M, tol: float = RANK_TOL) -> int:
    return len(rref(M, tol)[1])


def solve_affine(M, b, tol: float = RANK_TOL):
    """Solve ``M·v = b`` by elimination on the augmented matrix.

    Returns ``(particular, null_basis, rank)``; ``null_basis`` has one column
    per free variable. Raises ``ValueError`` if the system is inconsistent.
    """
    M = np.asarray(M, dtype=float)
    b = np.asarray(b, dtype=float).reshape(-1)
    rows, cols = M.shape
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    R, pivots = rref(np.hstack([M, b[:, None]]), tol, scale)
    if cols in pivots:
        raise ValueError("inconsistent equality system")
    particular = np.zeros(cols)
    for r, c in enumerate(pivots):
        particular[c] = R[r, -1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)))
    for k, f in enumerate(free):
        basis[f, k] = 1.0
        for r, c in enumerate(pivots):
            basis[c, k] = -R[r, f]
    return particular, basis, len(pivots)


def orthonormal_columns(V, tol: float = 1e-9) -> np.ndarray:
    """Modified Gram-Schmidt, dropping columns that fall below ``tol``."""
    out = []
    for v in np.asarray(V, dtype=float).T:
        w = v.copy()
        for _ in range(2):
            for q in out:
                w -= (q @ w) * q
        norm = np.linalg.norm(w)
        if norm > tol * max(1.0, np.linalg.norm(v)):
            out.append(w / norm)
    return np.array(out).T.reshape(V.shape[0], len(out))


def lu_solve(A, B, pivot_tol: float = 1e-12) -> np.ndarray:
    """Solve ``A·X = B`` by LU with partial pivoting; raise if a pivot is tiny."""
    A = np.array(A, dtype=float)
    X = np.array(B, dtype=float)
    vector = X.ndim == 1
    if vector:
        X = X[:, None]
    n = A.shape[0]
    if A.shape != (n, n) or X.shape[0] != n:
        raise ValueError("lu_solve needs a square system")
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) <= pivot_tol:
            raise np.linalg.LinAlgError(f"singular matrix: pivot {k} is {A[p, k]:.3g}")
        if p != k:
            A[[k, p]] = A[[p, k]]
            X[[k, p]] = X[[p, k]]
        factors = A[k + 1:, k] / A[k, k]
        A[k + 1:, k:] -= np.outer(factors, A[k, k:])
        X[k + 1:] -= np.outer(factors, X[k])
    for k in range(n - 1, -1, -1):
        X[k] = (X[k] - A[k, k + 1:] @ X[k + 1:]) / A[k, k]
    return X[:, 0] if vector else X
