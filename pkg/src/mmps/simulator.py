"""Cycle-by-cycle simulation of a certified implicit MMPS system."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import MmpsSystem, evaluate_rhs
from .solvability import SolvabilityCertificate
from .tropical import EPS, TOP, hilbert_norm

RESIDUAL_TOL = 1e-8


def step(system: MmpsSystem, cert: SolvabilityCertificate, x_prev) -> np.ndarray:
    """Solve ``x = A ⊗ (B ⊗' (C·x_prev + D·x))`` by substitution in certificate order.

    Each intermediate ``z_l`` is computed on first use; the certificate
    guarantees every state it reads through ``D`` is already known.
    """
    n = system.n
    if len(cert.order) != n:
        raise ValueError("certificate does not match the system size")
    x_prev = np.asarray(x_prev, dtype=float)
    if x_prev.shape != (n,) or not np.isfinite(x_prev).all():
        raise ValueError(f"x_prev must be a finite vector of length {n}")
    A, B, D = system.A, system.B, system.D
    base = system.C @ x_prev
    x = np.full(n, np.nan)
    done = np.zeros(n, dtype=bool)
    z = np.full(system.p, np.nan)
    z_done = np.zeros(system.p, dtype=bool)
    d_cols = [np.flatnonzero(row) for row in D]
    for i in cert.order:
        best = EPS
        for j in np.flatnonzero(np.isfinite(A[i])):
            inner = TOP
            for l in np.flatnonzero(np.isfinite(B[j])):
                if not z_done[l]:
                    cols = d_cols[l]
                    if not done[cols].all():
                        raise RuntimeError(f"state {i} needs z[{l}] before its inputs are computed")
                    z[l] = base[l] + D[l, cols] @ x[cols]
                    z_done[l] = True
                inner = min(inner, B[j, l] + z[l])
            best = max(best, A[i, j] + inner)
        x[i] = best
        done[i] = True
    return x


@dataclass
class Trajectory:
    states: np.ndarray          # (K + 1) × n, row k is x(k)
    residuals: np.ndarray       # length K
    names: tuple[str, ...]

    @property
    def cycles(self) -> int:
        return self.states.shape[0] - 1


def residual(system: MmpsSystem, x_prev, x) -> float:
    return float(np.abs(evaluate_rhs(system, x_prev, x) - x).max(initial=0.0))


def simulate(system: MmpsSystem, cert: SolvabilityCertificate, x0, K: int) -> Trajectory:
    """``K`` cycles from ``x0``; raises ``FloatingPointError`` on overflow."""
    if K < 1:
        raise ValueError("K must be at least 1")
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (system.n,) or not np.isfinite(x0).all():
        raise ValueError(f"x0 must be a finite vector of length {system.n}")
    states = np.empty((K + 1, system.n))
    states[0] = x0
    res = np.empty(K)
    for k in range(1, K + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            states[k] = step(system, cert, states[k - 1])
        if not np.isfinite(states[k]).all():
            raise FloatingPointError(f"state became non-finite at cycle {k}")
        res[k - 1] = residual(system, states[k - 1], states[k])
    return Trajectory(states=states, residuals=res, names=tuple(system.names()))


@dataclass
class GrowthEstimate:
    rates: np.ndarray
    temporal_rate: float | None
    consistent: bool
    verdict: str


def empirical_growth(system: MmpsSystem, traj: Trajectory, tail_fraction: float = 0.5,
                     tol: float = 1e-6) -> GrowthEstimate:
    """Mean per-cycle increment of each state over the trailing part of ``traj``."""
    K = traj.cycles
    if K < 4:
        raise ValueError("need at least 4 cycles")
    start = min(K - 1, int(np.floor(K * (1.0 - tail_fraction))))
    rates = np.diff(traj.states[start:], axis=0).mean(axis=0)
    s = system.s.astype(bool)
    t_rates, q_rates = rates[s], rates[~s]
    common = float(np.median(t_rates)) if t_rates.size else None
    ok = (t_rates.size == 0 or np.abs(t_rates - common).max() <= tol) and \
        np.abs(q_rates).max(initial=0.0) <= tol
    verdict = f"consistent with lambda = {common:.10g}" if ok else "no common growth rate"
    return GrowthEstimate(rates=rates, temporal_rate=common, consistent=bool(ok), verdict=verdict)


@dataclass
class BufferProbe:
    hilbert: np.ndarray          # ‖x_t(k)‖ in the projective norm, k = 0..K
    running_max: np.ndarray
    quantity_max: np.ndarray     # max |x_q(k)|

    @property
    def bound(self) -> float:
        return float(self.running_max[-1])

    def growing(self, window: int = 5, factor: float = 1.5) -> bool:
        """Crude divergence flag: the norm keeps increasing by ``factor`` over the last windows."""
        h = self.hilbert
        if h.size < 2 * window + 1:
            return bool(h[-1] > factor * max(h[0], 1e-12) and np.all(np.diff(h) > 0))
        return bool(h[-1] > factor * h[-1 - window] > factor ** 2 * h[-1 - 2 * window])


def buffer_stability_probe(system: MmpsSystem, cert: SolvabilityCertificate, x0, K: int) -> BufferProbe:
    traj = simulate(system, cert, x0, K)
    s = system.s.astype(bool)
    h = np.array([hilbert_norm(x[s]) for x in traj.states])
    q = np.abs(traj.states[:, ~s]).max(axis=1, initial=0.0)
    return BufferProbe(hilbert=h, running_max=np.maximum.accumulate(h), quantity_max=q)
