"""Extended-real scalars and dense tropical matrix kernels.

Values live in plain float64 numpy arrays. ``EPS`` (-inf) is the max-plus
zero and ``TOP`` (+inf) the min-plus zero; NaN is never a legal entry.
"""

from __future__ import annotations

import numpy as np

EPS = -np.inf
TOP = np.inf


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D float array, rejecting NaN."""
    arr = np.array(a, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if np.isnan(arr).any():
        raise ValueError(f"{name} contains NaN")
    return arr


def _check_inner(A: np.ndarray, C: np.ndarray) -> None:
    if A.shape[1] != C.shape[0]:
        raise ValueError(f"inner dimensions differ: {A.shape} x {C.shape}")


def _as_operand(x):
    arr = np.asarray(x, dtype=float)
    vector = arr.ndim == 1
    return (arr.reshape(-1, 1) if vector else arr), vector


def maxplus_mul(A, C) -> np.ndarray:
    """Max-plus product ``A ⊗ C``.

    ``EPS`` absorbs everything, including ``TOP``. A 1-D right operand is
    treated as a column and a 1-D result is returned.
    """
    A = as_matrix(A, "A")
    Cm, vector = _as_operand(C)
    _check_inner(A, Cm)
    with np.errstate(invalid="ignore"):
        terms = A[:, :, None] + Cm[None, :, :]
    absorbed = np.isneginf(A)[:, :, None] | np.isneginf(Cm)[None, :, :]
    terms[absorbed] = EPS
    if A.shape[1] == 0:
        out = np.full((A.shape[0], Cm.shape[1]), EPS)
    else:
        out = terms.max(axis=1)
    return out[:, 0] if vector else out


def minplus_mul(A, C) -> np.ndarray:
    """Min-plus product ``A ⊗' C``; ``TOP`` absorbs everything, including ``EPS``."""
    A = as_matrix(A, "A")
    Cm, vector = _as_operand(C)
    _check_inner(A, Cm)
    with np.errstate(invalid="ignore"):
        terms = A[:, :, None] + Cm[None, :, :]
    absorbed = np.isposinf(A)[:, :, None] | np.isposinf(Cm)[None, :, :]
    terms[absorbed] = TOP
    if A.shape[1] == 0:
        out = np.full((A.shape[0], Cm.shape[1]), TOP)
    else:
        out = terms.min(axis=1)
    return out[:, 0] if vector else out


def conv_mul(C, x) -> np.ndarray:
    """Conventional product on finite data."""
    C = np.asarray(C, dtype=float)
    x = np.asarray(x, dtype=float)
    if not (np.isfinite(C).all() and np.isfinite(x).all()):
        raise ValueError("conv_mul requires finite entries")
    if C.ndim != 2 or C.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: {C.shape} . {x.shape}")
    return C @ x


def kron_ones(A, n: int, side: str = "right") -> np.ndarray:
    """Stack copies of ``A`` against a ones vector.

    ``side="right"`` gives ``A ⊠ 1_n`` (each row repeated ``n`` times in
    place); ``side="left"`` gives ``1_n ⊠ A`` (the whole of ``A`` repeated).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if side == "right":
        return np.repeat(A, n, axis=0)
    if side == "left":
        return np.tile(A, (n, 1))
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def vec_rowmajor(A) -> np.ndarray:
    """Row-major stacking of ``A`` into a 1-D vector."""
    return np.asarray(A, dtype=float).reshape(-1)


def diag_tropical(v, flavor: str = "max") -> np.ndarray:
    """Tropical diagonal matrix; off-diagonal is ``EPS`` (max) or ``TOP`` (min).

    The inverse of ``diag_tropical(v, f)`` is ``diag_tropical(-v, f)``.
    """
    v = np.asarray(v, dtype=float).reshape(-1)
    if not np.isfinite(v).all():
        raise ValueError("diagonal entries must be finite")
    if flavor == "max":
        fill = EPS
    elif flavor == "min":
        fill = TOP
    else:
        raise ValueError(f"flavor must be 'max' or 'min', got {flavor!r}")
    D = np.full((v.size, v.size), fill)
    np.fill_diagonal(D, v)
    return D


def hilbert_norm(x) -> float:
    """Hilbert projective norm: largest minus smallest component."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size == 0:
        raise ValueError("hilbert_norm of an empty vector")
    return float(x.max() - x.min())


def is_regular(A, sentinel: float = EPS) -> bool:
    """True iff every row holds at least one finite entry.

    ``sentinel`` is the zero the matrix is written over (``EPS`` for A-type,
    ``TOP`` for B-type); an entry holding the other infinity also counts as
    non-finite.
    """
    return not irregular_rows(A)


def irregular_rows(A) -> list[int]:
    """Indices of rows without any finite entry."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    return [i for i in range(A.shape[0]) if not np.isfinite(A[i]).any()]
