"""Growth rates via one linear program per footprint pair.

A footprint pair picks one finite entry per row of ``A`` and per row of
``B``: the arguments assumed to attain the max (resp. min) at a fixed point.
Each pair gives an LP in ``(lambda, x, y)`` whose optimum, when it exists, is
a growth rate with a representative fixed point.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .lp import LinearProgram, LpOutcome, LpStatus, solve_lp
from .model import MmpsSystem, TEMPORAL

RATE_TOL = 1e-6


@dataclass(frozen=True)
class FootprintPair:
    """Selected column per row of ``A`` (``a_sel``) and of ``B`` (``b_sel``)."""

    a_sel: tuple[int, ...]
    b_sel: tuple[int, ...]
    shape_a: tuple[int, int]
    shape_b: tuple[int, int]

    @property
    def G_A(self) -> np.ndarray:
        G = np.zeros(self.shape_a)
        G[np.arange(len(self.a_sel)), self.a_sel] = 1.0
        return G

    @property
    def G_B(self) -> np.ndarray:
        G = np.zeros(self.shape_b)
        G[np.arange(len(self.b_sel)), self.b_sel] = 1.0
        return G

    @classmethod
    def from_matrices(cls, G_A, G_B) -> "FootprintPair":
        G_A, G_B = np.asarray(G_A), np.asarray(G_B)
        for name, G in (("G_A", G_A), ("G_B", G_B)):
            if not np.array_equal(G.sum(axis=1), np.ones(G.shape[0])) or not np.isin(G, (0, 1)).all():
                raise ValueError(f"{name} must hold exactly one 1 per row")
        return cls(tuple(int(j) for j in G_A.argmax(axis=1)),
                   tuple(int(l) for l in G_B.argmax(axis=1)),
                   G_A.shape, G_B.shape)

    def check(self, system: MmpsSystem) -> None:
        if self.shape_a != system.A.shape or self.shape_b != system.B.shape:
            raise ValueError("footprint shape does not match the system")
        for i, j in enumerate(self.a_sel):
            if not np.isfinite(system.A[i, j]):
                raise ValueError(f"footprint selects infinite A[{i},{j}]")
        for j, l in enumerate(self.b_sel):
            if not np.isfinite(system.B[j, l]):
                raise ValueError(f"footprint selects infinite B[{j},{l}]")

    def label(self) -> str:
        return "A:" + ",".join(map(str, self.a_sel)) + "|B:" + ",".join(map(str, self.b_sel))


def _finite_columns(M: np.ndarray) -> list[list[int]]:
    return [list(np.flatnonzero(np.isfinite(row))) for row in M]


def footprint_count(system: MmpsSystem) -> int:
    """Product over rows of A and B of the number of finite entries."""
    return math.prod(len(c) for c in _finite_columns(system.A)) * \
        math.prod(len(c) for c in _finite_columns(system.B))


def enumerate_footprints(system: MmpsSystem) -> Iterator[FootprintPair]:
    """Yield every footprint pair in lexicographic order of the selections."""
    choices = _finite_columns(system.A) + _finite_columns(system.B)
    n = system.n
    for combo in itertools.product(*choices):
        yield FootprintPair(tuple(int(c) for c in combo[:n]),
                            tuple(int(c) for c in combo[n:]),
                            system.A.shape, system.B.shape)


def anchor_index(system: MmpsSystem) -> int:
    return system.kind_x.index(TEMPORAL)


def build_lpp(system: MmpsSystem, fp: FootprintPair) -> LinearProgram:
    """LP over ``v = (lambda, x, y)`` with ``w = (C + D)·x`` substituted.

    For finite ``A[i,j]``:  ``-s_i·lambda - x_i + y_j  (= or <=)  -A[i,j]``.
    For finite ``B[j,l]``:  ``y_j - d_l·lambda - [(C+D)·x]_l  (= or <=)  B[j,l]``.
    Equalities where the footprint selects the entry. The first temporal
    state is pinned to 0 to remove the shift direction.
    """
    fp.check(system)
    n, m = system.n, system.m
    nv = 1 + n + m
    s, d, CD = system.s, system.d, system.CD
    eq_rows, eq_rhs, in_rows, in_rhs = [], [], [], []
    for i, j in np.argwhere(np.isfinite(system.A)):
        row = np.zeros(nv)
        row[0] = -s[i]
        row[1 + i] = -1.0
        row[1 + n + j] = 1.0
        target = (eq_rows, eq_rhs) if fp.a_sel[i] == j else (in_rows, in_rhs)
        target[0].append(row)
        target[1].append(-system.A[i, j])
    for j, l in np.argwhere(np.isfinite(system.B)):
        row = np.zeros(nv)
        row[0] = -d[l]
        row[1:1 + n] = -CD[l]
        row[1 + n + j] = 1.0
        target = (eq_rows, eq_rhs) if fp.b_sel[j] == l else (in_rows, in_rhs)
        target[0].append(row)
        target[1].append(system.B[j, l])
    anchor = np.zeros(nv)
    anchor[1 + anchor_index(system)] = 1.0
    eq_rows.append(anchor)
    eq_rhs.append(0.0)
    c = np.zeros(nv)
    c[0] = 1.0
    return LinearProgram(c=c, A_eq=np.array(eq_rows), b_eq=np.array(eq_rhs),
                         A_ineq=np.array(in_rows).reshape(-1, nv), b_ineq=np.array(in_rhs))


@dataclass
class GrowthSolution:
    lam: float
    x_e: np.ndarray
    y_e: np.ndarray
    w_e: np.ndarray
    footprint: FootprintPair

    def constraint_violation(self, system: MmpsSystem) -> float:
        """Largest violation of the footprint LP constraints at this solution."""
        lp = build_lpp(system, self.footprint)
        v = np.concatenate([[self.lam], self.x_e, self.y_e])
        eq = np.abs(lp.A_eq[:-1] @ v - lp.b_eq[:-1])
        ineq = np.maximum(lp.A_ineq @ v - lp.b_ineq, 0.0)
        return float(max(eq.max(initial=0.0), ineq.max(initial=0.0)))


@dataclass
class GrowthRateReport:
    solutions: list[GrowthSolution] = field(default_factory=list)
    total_lpps: int = 0
    feasible: int = 0
    infeasible: int = 0
    unbounded: int = 0
    outcomes: list[str] = field(default_factory=list)

    def rates(self, tol: float = RATE_TOL) -> list[float]:
        """Distinct growth rates, ascending, merged within ``tol``."""
        out: list[float] = []
        for lam in sorted(sol.lam for sol in self.solutions):
            if not out or lam - out[-1] > tol:
                out.append(lam)
        return out

    def grouped(self, tol: float = RATE_TOL) -> list[tuple[float, list[GrowthSolution]]]:
        return [(lam, [s for s in self.solutions if abs(s.lam - lam) <= tol])
                for lam in self.rates(tol)]

    def counts(self) -> dict[str, int]:
        return {"total_lpps": self.total_lpps, "feasible": self.feasible,
                "infeasible": self.infeasible, "unbounded": self.unbounded}


def solve_footprint(system: MmpsSystem, fp: FootprintPair) -> tuple[LpOutcome, GrowthSolution | None]:
    outcome = solve_lp(build_lpp(system, fp))
    if not outcome.optimal:
        return outcome, None
    n = system.n
    v = outcome.v
    x_e = v[1:1 + n].copy()
    sol = GrowthSolution(lam=float(v[0]), x_e=x_e, y_e=v[1 + n:].copy(),
                         w_e=system.CD @ x_e, footprint=fp)
    return outcome, sol


def _solve_one(args):
    system, fp = args
    outcome, sol = solve_footprint(system, fp)
    return outcome.status, sol


def solve_all(system: MmpsSystem, parallel: int = 1) -> GrowthRateReport:
    """Solve the LP of every footprint pair and tally the outcomes.

    With ``parallel > 1`` the LPs are farmed out to worker processes; results
    are merged in enumeration order either way.
    """
    footprints = list(enumerate_footprints(system))
    jobs = [(system, fp) for fp in footprints]
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(_solve_one, jobs, chunksize=max(1, len(jobs) // (4 * parallel))))
    else:
        results = [_solve_one(job) for job in jobs]
    report = GrowthRateReport(total_lpps=len(footprints))
    for status, sol in results:
        report.outcomes.append(status.value)
        if status is LpStatus.OPTIMAL:
            report.feasible += 1
            report.solutions.append(sol)
        elif status is LpStatus.UNBOUNDED:
            report.unbounded += 1
        else:
            report.infeasible += 1
    return report
