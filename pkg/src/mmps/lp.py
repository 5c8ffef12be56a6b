"""Dense two-phase primal simplex for small linear programs.

Problems are stated over free variables::

    minimize    c·v
    subject to  A_eq·v = b_eq,  A_ineq·v <= b_ineq

and converted to standard form by splitting every variable into a
difference of two nonnegative parts and adding one slack per inequality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class LpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass
class LinearProgram:
    c: np.ndarray
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    A_ineq: np.ndarray | None = None
    b_ineq: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        nv = self.c.size
        self.A_eq, self.b_eq = _block(self.A_eq, self.b_eq, nv, "equality")
        self.A_ineq, self.b_ineq = _block(self.A_ineq, self.b_ineq, nv, "inequality")
        for name in ("c", "A_eq", "b_eq", "A_ineq", "b_ineq"):
            if not np.isfinite(getattr(self, name)).all():
                raise ValueError(f"{name} has non-finite entries")

    @property
    def num_vars(self) -> int:
        return self.c.size


def _block(A, b, nv, what):
    if A is None:
        if b is not None and np.size(b):
            raise ValueError(f"{what} right-hand side given without a matrix")
        return np.zeros((0, nv)), np.zeros(0)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        A = A.reshape(0, nv)
    b = np.asarray(b, dtype=float).reshape(-1)
    if A.shape[1] != nv:
        raise ValueError(f"{what} matrix has {A.shape[1]} columns, expected {nv}")
    if A.shape[0] != b.size:
        raise ValueError(f"{what} system has {A.shape[0]} rows but {b.size} bounds")
    return A, b


@dataclass
class LpOutcome:
    status: LpStatus
    v: np.ndarray | None = None
    objective_value: float | None = None
    ray: np.ndarray | None = None
    phase1_objective: float = 0.0
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


_PIVOT_TOL = 1e-10


class _Tableau:
    """Row-reduced tableau ``[T | rhs]`` with a basis list and a cost row."""

    def __init__(self, M: np.ndarray, rhs: np.ndarray, basis: list[int]):
        self.T = np.hstack([M, rhs[:, None]])
        self.basis = basis
        self.iterations = 0

    def pivot(self, r: int, col: int) -> None:
        T = self.T
        T[r] /= T[r, col]
        others = T[:, col].copy()
        others[r] = 0.0
        T -= np.outer(others, T[r])
        T[np.abs(T) < 1e-14] = 0.0
        self.basis[r] = col
        self.iterations += 1

    def reduced_costs(self, cost: np.ndarray, ncols: int) -> np.ndarray:
        cb = cost[self.basis]
        return cost[:ncols] - cb @ self.T[:, :ncols]

    def objective(self, cost: np.ndarray) -> float:
        return float(cost[self.basis] @ self.T[:, -1])

    def run(self, cost: np.ndarray, allowed: np.ndarray, opt_tol: float):
        """Minimise ``cost`` over columns flagged in ``allowed``.

        Returns ``None`` at optimality or the entering column of an unbounded ray.
        """
        m = self.T.shape[0]
        ncols = allowed.size
        stall_limit = 5 * (m + ncols)
        stalled = 0
        best = self.objective(cost)
        bland = False
        while True:
            rc = self.reduced_costs(cost, ncols)
            rc[~allowed] = 0.0
            rc[self.basis] = 0.0
            candidates = np.flatnonzero(rc < -opt_tol)
            if candidates.size == 0:
                return None
            col = int(candidates[0]) if bland else int(candidates[np.argmin(rc[candidates])])
            column = self.T[:, col]
            positive = column > _PIVOT_TOL
            if not positive.any():
                return col
            ratios = np.full(m, np.inf)
            ratios[positive] = self.T[positive, -1] / column[positive]
            ratios[ratios < 0] = 0.0
            rmin = ratios.min()
            ties = np.flatnonzero(ratios <= rmin + 1e-12 * max(1.0, abs(rmin)))
            if bland:
                r = int(min(ties, key=lambda i: self.basis[i]))
            else:
                r = int(ties[np.argmax(column[ties])])
            self.pivot(r, col)
            obj = self.objective(cost)
            if obj < best - opt_tol:
                best, stalled = obj, 0
            else:
                stalled += 1
                if stalled > stall_limit:
                    bland = True
            if self.iterations > 50 * stall_limit:
                raise RuntimeError("simplex failed to terminate")


def solve_lp(lp: LinearProgram, feas_tol: float = 1e-9, opt_tol: float = 1e-9) -> LpOutcome:
    """Solve ``lp`` by two-phase primal simplex.

    Dantzig pricing is used until the objective stalls for
    ``5·(rows+cols)`` pivots, after which Bland's rule takes over.
    """
    nv = lp.num_vars
    me, mi = lp.A_eq.shape[0], lp.A_ineq.shape[0]
    rows = me + mi
    # columns: v+ (nv), v- (nv), slacks (mi), artificials (rows)
    nstd = 2 * nv + mi
    M = np.zeros((rows, nstd + rows))
    rhs = np.concatenate([lp.b_eq, lp.b_ineq])
    M[:me, :nv] = lp.A_eq
    M[:me, nv:2 * nv] = -lp.A_eq
    M[me:, :nv] = lp.A_ineq
    M[me:, nv:2 * nv] = -lp.A_ineq
    M[me:, 2 * nv:nstd] = np.eye(mi)
    flip = rhs < 0
    M[flip] *= -1
    rhs = np.where(flip, -rhs, rhs)

    basis = []
    for r in range(rows):
        if r >= me and not flip[r]:
            basis.append(2 * nv + (r - me))
        else:
            M[r, nstd + r] = 1.0
            basis.append(nstd + r)
    tab = _Tableau(M, rhs, basis)
    is_art = np.zeros(nstd + rows, dtype=bool)
    is_art[nstd:] = True

    scale = max(1.0, float(np.abs(rhs).max(initial=0.0)))
    phase1_cost = is_art.astype(float)
    if any(b >= nstd for b in tab.basis):
        tab.run(phase1_cost, np.ones(nstd + rows, dtype=bool), opt_tol)
    phase1 = tab.objective(phase1_cost)
    if phase1 > feas_tol * scale:
        return LpOutcome(LpStatus.INFEASIBLE, phase1_objective=phase1,
                         iterations=tab.iterations)

    # Drive zero-level artificials out of the basis; drop rows that are redundant.
    keep = []
    for r in range(rows):
        if tab.basis[r] >= nstd:
            nz = np.flatnonzero(np.abs(tab.T[r, :nstd]) > 1e-9)
            if nz.size == 0:
                continue
            tab.pivot(r, int(nz[np.argmax(np.abs(tab.T[r, nz]))]))
        keep.append(r)
    tab.T = tab.T[keep]
    tab.basis = [tab.basis[r] for r in keep]

    cost = np.zeros(nstd + rows)
    cost[:nv] = lp.c
    cost[nv:2 * nv] = -lp.c
    allowed = ~is_art
    entering = tab.run(cost, allowed, opt_tol)
    if entering is not None:
        direction = np.zeros(nstd + rows)
        direction[entering] = 1.0
        direction[tab.basis] = -tab.T[:, entering]
        ray = direction[:nv] - direction[nv:2 * nv]
        return LpOutcome(LpStatus.UNBOUNDED, ray=ray, phase1_objective=phase1,
                         iterations=tab.iterations)

    x = _refine(M[:, :nstd], rhs, tab, nstd)
    v = x[:nv] - x[nv:2 * nv]
    return LpOutcome(LpStatus.OPTIMAL, v=v, objective_value=float(lp.c @ v),
                     phase1_objective=phase1, iterations=tab.iterations)


def _refine(M: np.ndarray, rhs: np.ndarray, tab: _Tableau, nstd: int) -> np.ndarray:
    """Recompute basic values from the original data to shed pivot round-off."""
    x = np.zeros(nstd)
    basis = list(tab.basis)
    x[basis] = tab.T[:, -1]
    Bm = M[:, basis]
    sol, *_ = np.linalg.lstsq(Bm, rhs, rcond=None)
    atol = 1e-9 * max(1.0, float(np.abs(rhs).max(initial=0.0)))
    if np.all(sol >= -atol) and np.allclose(Bm @ sol, rhs, atol=atol):
        x[basis] = np.maximum(sol, 0.0)
    return x


def residuals(lp: LinearProgram, v: np.ndarray) -> tuple[float, float]:
    """Max equality violation and max inequality excess at ``v``."""
    eq = float(np.abs(lp.A_eq @ v - lp.b_eq).max(initial=0.0))
    ineq = float(np.maximum(lp.A_ineq @ v - lp.b_ineq, 0.0).max(initial=0.0))
    return eq, ineq
