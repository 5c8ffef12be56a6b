"""Polyhedral set of fixed points belonging to one growth rate and footprint.

With the growth rate fixed, the footprint LP becomes a square equality
system ``H_eq·v = h_eq`` plus inequalities ``H_ineq·v <= h_ineq`` over the
extended vector ``v = (x, y, w)``. Solutions form an affine family
``v_p + Σ σ_i·ŝ_i`` cut down by the inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .growth import FootprintPair, GrowthSolution
from .linalg import RANK_TOL, orthonormal_columns, solve_affine
from .lp import LinearProgram, LpStatus, solve_lp
from .model import MmpsSystem


@dataclass
class FixedPointConstraints:
    H_eq: np.ndarray
    h_eq: np.ndarray
    H_ineq: np.ndarray
    h_ineq: np.ndarray
    lam: float
    footprint: FootprintPair
    ineq_labels: list[str] = field(default_factory=list)


def build_constraints(system: MmpsSystem, fp: FootprintPair, lam: float) -> FixedPointConstraints:
    """Equalities from selected entries and ``w = (C + D)·x``; inequalities from the rest."""
    fp.check(system)
    n, m, p = system.n, system.m, system.p
    N = n + m + p
    s, d = system.s, system.d
    eq_rows, eq_rhs = [], []
    in_rows, in_rhs, labels = [], [], []

    a_rows = {}
    for i, j in np.argwhere(np.isfinite(system.A)):
        row = np.zeros(N)
        row[i] = -1.0
        row[n + j] = 1.0
        rhs = -system.A[i, j] + s[i] * lam
        if fp.a_sel[i] == j:
            a_rows[i] = (row, rhs)
        else:
            in_rows.append(row)
            in_rhs.append(rhs)
            labels.append(f"A[{i},{j}]")
    b_rows = {}
    for j, l in np.argwhere(np.isfinite(system.B)):
        row = np.zeros(N)
        row[n + j] = 1.0
        row[n + m + l] = -1.0
        rhs = system.B[j, l] + d[l] * lam
        if fp.b_sel[j] == l:
            b_rows[j] = (row, rhs)
        else:
            in_rows.append(row)
            in_rhs.append(rhs)
            labels.append(f"B[{j},{l}]")
    for i in range(n):
        eq_rows.append(a_rows[i][0])
        eq_rhs.append(a_rows[i][1])
    for j in range(m):
        eq_rows.append(b_rows[j][0])
        eq_rhs.append(b_rows[j][1])
    for l in range(p):
        row = np.zeros(N)
        row[:n] = -system.CD[l]
        row[n + m + l] = 1.0
        eq_rows.append(row)
        eq_rhs.append(0.0)
    return FixedPointConstraints(
        H_eq=np.array(eq_rows), h_eq=np.array(eq_rhs),
        H_ineq=np.array(in_rows).reshape(-1, N), h_ineq=np.array(in_rhs),
        lam=float(lam), footprint=fp, ineq_labels=labels)


def shift_direction(system: MmpsSystem, fp: FootprintPair) -> np.ndarray:
    """Extended shift direction ``(s, G_B·w_s, w_s)`` with ``w_s = (C + D)·s``."""
    w_s = system.CD @ system.s
    y_s = fp.G_B @ w_s
    return np.concatenate([system.s, y_s, w_s])


def lift(system: MmpsSystem, fp: FootprintPair, lam: float, x, homogeneous: bool = False) -> np.ndarray:
    """Extend a state ``x`` to ``(x, y, w)`` through the selected B entries.

    With ``homogeneous=True`` the constant terms are dropped, which lifts
    a direction rather than a point.
    """
    x = np.asarray(x, dtype=float)
    w = system.CD @ x
    y = fp.G_B @ w
    if not homogeneous:
        sel = np.array(fp.b_sel)
        y = y + system.B[np.arange(system.m), sel] + system.d[sel] * lam
    return np.concatenate([x, y, w])


@dataclass
class FixedPointSet:
    v_particular: np.ndarray
    directions: np.ndarray          # columns are extended directions, first = shift
    rank_Heq: int
    constraints: FixedPointConstraints
    n: int

    @property
    def x_particular(self) -> np.ndarray:
        return self.v_particular[:self.n]

    @property
    def x_directions(self) -> np.ndarray:
        return self.directions[:self.n]

    @property
    def num_directions(self) -> int:
        return self.directions.shape[1]

    @property
    def sigma_polytope(self) -> tuple[np.ndarray, np.ndarray]:
        """``(P, q)`` with the fixed points given by ``P·σ <= q``."""
        c = self.constraints
        return c.H_ineq @ self.directions, c.h_ineq - c.H_ineq @ self.v_particular

    def point(self, sigma) -> np.ndarray:
        return self.v_particular + self.directions @ np.asarray(sigma, dtype=float)

    def x_point(self, sigma) -> np.ndarray:
        return self.point(sigma)[:self.n]


def _normalize_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v / v[k]


def solve_fixed_point_set(fc: FixedPointConstraints, system: MmpsSystem,
                          tol: float = RANK_TOL) -> FixedPointSet:
    """Particular solution, rank and direction basis of the equality system.

    The first direction is the analytic shift direction; the others span the
    rest of the null space, orthogonal to it and scaled so their
    largest-magnitude entry is +1.
    """
    particular, null, rank_eq = solve_affine(fc.H_eq, fc.h_eq, tol)
    s_hat = shift_direction(system, fc.footprint)
    if np.abs(fc.H_eq @ s_hat).max(initial=0.0) > 1e-9:
        raise ValueError("shift direction is not in the null space; system is not time-invariant")
    u = s_hat / np.linalg.norm(s_hat)
    rest = null - np.outer(u, u @ null)
    others = orthonormal_columns(rest, tol=1e-8)
    if others.shape[1] != null.shape[1] - 1:
        raise ValueError("null-space basis lost rank while aligning to the shift direction")
    cols = [s_hat] + [_normalize_sign(q) for q in others.T]
    return FixedPointSet(v_particular=particular, directions=np.column_stack(cols),
                         rank_Heq=rank_eq, constraints=fc, n=system.n)


def fixed_point_set(system: MmpsSystem, sol: GrowthSolution, tol: float = RANK_TOL) -> FixedPointSet:
    return solve_fixed_point_set(build_constraints(system, sol.footprint, sol.lam), system, tol)


def reparameterize(fps: FixedPointSet, system: MmpsSystem, x_origin, x_directions) -> FixedPointSet:
    """Express the same set from a different origin and state-space directions.

    ``x_directions`` (n×f) must span the same space as ``fps.x_directions``;
    both origin and directions are lifted to extended vectors.
    """
    fc = fps.constraints
    x_dirs = np.atleast_2d(np.asarray(x_directions, dtype=float))
    if x_dirs.shape[0] != fps.n:
        x_dirs = x_dirs.T
    v0 = lift(system, fc.footprint, fc.lam, x_origin)
    dirs = np.column_stack([lift(system, fc.footprint, fc.lam, d, homogeneous=True) for d in x_dirs.T])
    if np.abs(fc.H_eq @ v0 - fc.h_eq).max() > 1e-8:
        raise ValueError("origin does not satisfy the equality constraints")
    if np.abs(fc.H_eq @ dirs).max() > 1e-8:
        raise ValueError("directions leave the equality solution space")
    return FixedPointSet(v_particular=v0, directions=dirs, rank_Heq=fps.rank_Heq,
                         constraints=fc, n=fps.n)


def sigma_bounds(fps: FixedPointSet) -> list[tuple[float, float]]:
    """Per-axis ``[lo, hi]`` of every σ over the σ-polytope (±inf when unbounded).

    Raises ``ValueError`` if the polytope is empty.
    """
    P, q = fps.sigma_polytope
    f = fps.num_directions
    bounds = []
    for i in range(f):
        ends = []
        for sign in (1.0, -1.0):
            c = np.zeros(f)
            c[i] = sign
            out = solve_lp(LinearProgram(c=c, A_ineq=P, b_ineq=q))
            if out.status is LpStatus.INFEASIBLE:
                raise ValueError("fixed-point polytope is empty")
            if out.status is LpStatus.UNBOUNDED:
                ends.append(-np.inf * sign)
            else:
                ends.append(sign * out.objective_value)
        bounds.append((ends[0], -ends[1] if np.isfinite(ends[1]) else np.inf))
    return bounds


def membership(fps: FixedPointSet, x_candidate, tol: float = 1e-6) -> bool:
    """Whether ``x_candidate`` is a fixed point of the set, up to ``tol``.

    Decided by one feasibility LP over σ with the state equations relaxed to
    ``|X·σ - (x - x_p)| <= tol`` and the polytope rows to ``<= q + tol``.
    """
    x = np.asarray(x_candidate, dtype=float)
    X = fps.x_directions
    r = x - fps.x_particular
    P, q = fps.sigma_polytope
    A = np.vstack([X, -X, P])
    b = np.concatenate([r + tol, -r + tol, q + tol])
    out = solve_lp(LinearProgram(c=np.zeros(fps.num_directions), A_ineq=A, b_ineq=b))
    return out.status is LpStatus.OPTIMAL
