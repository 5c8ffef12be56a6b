"""Normalized system with zero growth and its fixed point moved to the origin.

Entrywise, with ``d = D·s``::

    Ã[i,j] = A[i,j] - s_i·λ - x_e[i] + y_e[j]
    B̃[j,l] = B[j,l] + d_l·λ + w_e[l] - y_e[j]

A valid growth solution makes every finite ``Ã`` entry non-positive and
every finite ``B̃`` entry non-negative, with a zero in each row; the zeros
mark the footprint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .growth import FootprintPair, GrowthSolution
from .model import MmpsSystem
from .tropical import diag_tropical, maxplus_mul, minplus_mul

ZERO_TOL = 1e-8


@dataclass(frozen=True)
class NormalizedSystem:
    A_tilde: np.ndarray
    B_tilde: np.ndarray
    source: MmpsSystem
    source_lambda: float
    source_solution: GrowthSolution

    @property
    def C(self) -> np.ndarray:
        return self.source.C

    @property
    def D(self) -> np.ndarray:
        return self.source.D

    def as_system(self) -> MmpsSystem:
        """The normalized system as an ordinary MMPS system (same C, D, kinds)."""
        src = self.source
        return MmpsSystem(A=self.A_tilde, B=self.B_tilde, C=src.C, D=src.D,
                          kind_x=src.kind_x, kind_y=src.kind_y, kind_z=src.kind_z,
                          state_names=src.state_names)


def solution_at(system: MmpsSystem, fp: FootprintPair, lam: float, x_e) -> GrowthSolution:
    """Growth solution at a chosen state ``x_e``, with ``y``, ``w`` from the footprint.

    Useful when ``x_e`` is some other member of a fixed-point set than the
    LP vertex.
    """
    x_e = np.asarray(x_e, dtype=float).copy()
    w = system.CD @ x_e
    sel = np.array(fp.b_sel)
    y = w[sel] + system.B[np.arange(system.m), sel] + system.d[sel] * lam
    return GrowthSolution(lam=float(lam), x_e=x_e, y_e=y, w_e=w, footprint=fp)


def normalize(system: MmpsSystem, sol: GrowthSolution, tol: float = 1e-6) -> NormalizedSystem:
    """Conjugate ``A``, ``B`` by the fixed point of ``sol``.

    Raises ``ValueError`` when ``sol`` violates its footprint constraints by
    more than ``tol`` (relative to the data scale), since the sign structure
    would then be broken.
    """
    scale = max(1.0, float(np.abs(sol.x_e).max(initial=0.0)), abs(sol.lam))
    violation = sol.constraint_violation(system)
    if violation > tol * scale:
        raise ValueError(f"solution violates its footprint constraints by {violation:.3g}")
    lam = sol.lam
    with np.errstate(invalid="ignore"):
        A_t = system.A - (system.s * lam + sol.x_e)[:, None] + sol.y_e[None, :]
        B_t = system.B + (system.d * lam + sol.w_e)[None, :] - sol.y_e[:, None]
    A_t = np.where(np.isfinite(system.A), A_t, system.A)
    B_t = np.where(np.isfinite(system.B), B_t, system.B)
    return NormalizedSystem(A_tilde=A_t, B_tilde=B_t, source=system,
                            source_lambda=float(lam), source_solution=sol)


def conjugation_products(system: MmpsSystem, sol: GrowthSolution) -> tuple[np.ndarray, np.ndarray]:
    """Normalized matrices computed as tropical diagonal products.

    ``X⁻¹ ⊗ A ⊗ Y`` with ``X = diag(x_e + λ·s)``, ``Y = diag(y_e)``, and
    ``Y⁻¹ ⊗' B ⊗' W`` with ``W = diag(w_e + λ·d)``. Serves as a cross-check
    of the entrywise formulas in :func:`normalize`.
    """
    lam = sol.lam
    X_inv = diag_tropical(-(sol.x_e + lam * system.s), "max")
    Y = diag_tropical(sol.y_e, "max")
    A_t = maxplus_mul(maxplus_mul(X_inv, system.A), Y)
    Y_inv = diag_tropical(-sol.y_e, "min")
    W = diag_tropical(sol.w_e + lam * system.d, "min")
    B_t = minplus_mul(minplus_mul(Y_inv, system.B), W)
    return A_t, B_t


@dataclass
class StructureReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def verify_structure(ns: NormalizedSystem, tol: float = ZERO_TOL) -> StructureReport:
    """Check ``Ã <= 0``, ``B̃ >= 0`` and a zero in every row of each."""
    out = []
    for name, M, sign in (("A_tilde", ns.A_tilde, 1.0), ("B_tilde", ns.B_tilde, -1.0)):
        finite = np.isfinite(M)
        bad = np.argwhere(finite & (sign * np.where(finite, M, 0.0) > tol))
        for i, j in bad:
            out.append(f"{name}[{i},{j}] = {M[i, j]:.6g} has the wrong sign")
        for i, row in enumerate(M):
            if not (np.isfinite(row) & (np.abs(np.where(np.isfinite(row), row, 1.0)) <= tol)).any():
                out.append(f"{name}: no zero in row {i}")
    src = ns.source
    if not (np.array_equal(np.isneginf(ns.A_tilde), np.isneginf(src.A))
            and np.array_equal(np.isposinf(ns.B_tilde), np.isposinf(src.B))):
        out.append("infinite-entry pattern differs from the source system")
    return StructureReport(out)


def _zero_columns(M: np.ndarray, tol: float) -> list[list[int]]:
    return [[int(j) for j in np.flatnonzero(np.isfinite(row) & (np.abs(np.where(np.isfinite(row), row, 1.0)) <= tol))]
            for row in M]


def extract_footprint(ns: NormalizedSystem, tol: float = ZERO_TOL) -> list[FootprintPair]:
    """Every footprint pair compatible with the zero pattern, lexicographically.

    Rows with several zeros (the fixed point sits on a region boundary)
    contribute one footprint per choice.
    """
    choices = _zero_columns(ns.A_tilde, tol) + _zero_columns(ns.B_tilde, tol)
    n = ns.A_tilde.shape[0]
    return [FootprintPair(tuple(c[:n]), tuple(c[n:]), ns.A_tilde.shape, ns.B_tilde.shape)
            for c in itertools.product(*choices)]


def denormalize_state(ns: NormalizedSystem, x_tilde, k: int) -> np.ndarray:
    """Original coordinates ``x̃ + k·λ·s + x_e`` at cycle ``k``."""
    sol = ns.source_solution
    return np.asarray(x_tilde, dtype=float) + k * ns.source_lambda * ns.source.s + sol.x_e


def normalize_state(ns: NormalizedSystem, x, k: int) -> np.ndarray:
    """Inverse of :func:`denormalize_state`."""
    sol = ns.source_solution
    return np.asarray(x, dtype=float) - k * ns.source_lambda * ns.source.s - sol.x_e
