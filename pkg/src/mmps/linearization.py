"""Local linear model around a fixed point and the polyhedron where it holds.

In the region where the footprint's selections attain the max and min, the
normalized dynamics reduce to ``x̃(k) = M·x̃(k-1)`` with
``M = (I - G_A·G_B·D)⁻¹ · G_A·G_B·C``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .growth import FootprintPair
from .linalg import lu_solve
from .model import MmpsSystem, evaluate_rhs
from .normalization import NormalizedSystem
from .tropical import kron_ones, vec_rowmajor


@dataclass(frozen=True)
class LinearizedSystem:
    M: np.ndarray
    M1: np.ndarray
    M2: np.ndarray
    footprint: FootprintPair
    lam: float | None = None
    base_fixed_point: np.ndarray | None = None
    H: np.ndarray | None = None
    h: np.ndarray | None = None
    row_labels: tuple[str, ...] = ()

    def with_region(self, H, h, labels=()) -> "LinearizedSystem":
        return replace(self, H=H, h=h, row_labels=tuple(labels))

    def contains(self, x_tilde, margin: float = 0.0) -> bool:
        if self.H is None:
            raise ValueError("region not computed")
        return bool(np.all(self.H @ np.asarray(x_tilde, dtype=float) <= self.h - margin))


def linearize(system: MmpsSystem, fp: FootprintPair) -> LinearizedSystem:
    """``M1``, ``M2`` and ``M`` for one footprint.

    Raises ``numpy.linalg.LinAlgError`` if ``I - M1`` is singular, which can
    only happen for a system without a solvability certificate.
    """
    fp.check(system)
    G = fp.G_A @ fp.G_B
    M1 = G @ system.D
    M2 = G @ system.C
    M = lu_solve(np.eye(system.n) - M1, M2)
    return LinearizedSystem(M=M, M1=M1, M2=M2, footprint=fp)


def region(system: MmpsSystem, fp: FootprintPair, ns: NormalizedSystem, M):
    """Inequalities ``H·x̃ <= h`` describing where the footprint selections win.

    Upper rows come from unselected finite ``B̃`` entries, lower rows from
    unselected finite ``Ã`` entries. Rows with infinite bounds and the
    trivial rows of selected entries are dropped. Returns ``(H, h, labels)``.
    """
    n, m, p = system.n, system.m, system.p
    M = np.asarray(M, dtype=float)
    if M.shape != (n, n) or ns.A_tilde.shape != (n, m) or ns.B_tilde.shape != (m, p):
        raise ValueError("dimension mismatch between system, normalized system and M")
    G_A, G_B = fp.G_A, fp.G_B
    K = system.C + system.D @ M
    U = (kron_ones(G_B, p, "right") - kron_ones(np.eye(p), m, "left")) @ K
    L = (kron_ones(G_A, m, "right") - kron_ones(np.eye(m), n, "left")) @ G_B @ K
    H_full = np.vstack([U, -L])
    h_full = np.concatenate([vec_rowmajor(ns.B_tilde), -vec_rowmajor(ns.A_tilde)])
    labels_full = [f"B[{j},{l}]" for j in range(m) for l in range(p)] + \
                  [f"A[{i},{j}]" for i in range(n) for j in range(m)]
    selected = np.zeros(h_full.size, dtype=bool)
    for j, l in enumerate(fp.b_sel):
        selected[j * p + l] = True
    for i, j in enumerate(fp.a_sel):
        selected[m * p + i * m + j] = True
    keep = np.isfinite(h_full) & ~selected
    return H_full[keep], h_full[keep], [lab for lab, k in zip(labels_full, keep) if k]


def linearize_with_region(system: MmpsSystem, ns: NormalizedSystem, fp: FootprintPair | None = None) -> LinearizedSystem:
    fp = fp or ns.source_solution.footprint
    lin = linearize(system, fp)
    H, h, labels = region(system, fp, ns, lin.M)
    return replace(lin, lam=ns.source_lambda, base_fixed_point=ns.source_solution.x_e.copy(),
                   H=H, h=h, row_labels=tuple(labels))


def shifted_region(lin: LinearizedSystem, x_e_from, x_e_to):
    """Region bounds re-expressed around another fixed point of the same set."""
    delta = np.asarray(x_e_from, dtype=float) - np.asarray(x_e_to, dtype=float)
    return lin.H, lin.h + lin.H @ delta


def piecewise_step_check(ns: NormalizedSystem, lin: LinearizedSystem, x_tilde, tol: float = 1e-9) -> float:
    """Max difference between the normalized tropical step and ``M·x̃``.

    The tropical side is evaluated at ``(x̃, M·x̃)``. Raises ``ValueError`` if
    ``x̃`` is outside the region by more than ``tol``.
    """
    x = np.asarray(x_tilde, dtype=float)
    if lin.H is None:
        raise ValueError("region not computed")
    if np.any(lin.H @ x > lin.h + tol):
        raise ValueError("point lies outside the linearization region")
    x_next = lin.M @ x
    return float(np.abs(evaluate_rhs(ns.as_system(), x, x_next) - x_next).max(initial=0.0))
