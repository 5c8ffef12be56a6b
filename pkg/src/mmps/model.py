"""Implicit ABCD canonical MMPS systems.

A system evolves as ``x(k) = A ⊗ (B ⊗' (C·x(k-1) + D·x(k)))`` with
``A`` over ℝ∪{EPS}, ``B`` over ℝ∪{TOP} and finite ``C``, ``D``. Every state
and every intermediate (``y``, ``z``) carries a kind label, ``"t"`` for
temporal and ``"q"`` for quantity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tropical import EPS, TOP, maxplus_mul, minplus_mul

TEMPORAL = "t"
QUANTITY = "q"
KINDS = (TEMPORAL, QUANTITY)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def _kinds(labels, size: int, name: str) -> tuple[str, ...]:
    if labels is None:
        return (TEMPORAL,) * size
    out = tuple(str(k) for k in labels)
    if len(out) != size:
        raise ValueError(f"{name} has {len(out)} labels, expected {size}")
    bad = [k for k in out if k not in KINDS]
    if bad:
        raise ValueError(f"{name} holds unknown kind labels {bad}")
    return out


def indicator(kinds) -> np.ndarray:
    """0/1 vector marking temporal positions."""
    return np.array([1.0 if k == TEMPORAL else 0.0 for k in kinds])


@dataclass(frozen=True)
class MmpsSystem:
    """Autonomous implicit MMPS system in disjunctive ABCD form.

    Shapes: ``A`` is n×m, ``B`` is m×p, ``C`` and ``D`` are p×n. Kinds
    default to all-temporal when omitted.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    kind_x: tuple[str, ...] | None = None
    kind_y: tuple[str, ...] | None = None
    kind_z: tuple[str, ...] | None = None
    state_names: tuple[str, ...] | None = None

    def __post_init__(self):
        A = _frozen(np.atleast_2d(self.A))
        B = _frozen(np.atleast_2d(self.B))
        C = _frozen(np.atleast_2d(self.C))
        D = _frozen(np.atleast_2d(self.D))
        for name, arr in (("A", A), ("B", B), ("C", C), ("D", D)):
            if np.isnan(arr).any():
                raise ValueError(f"{name} contains NaN")
        n, m = A.shape
        if B.shape[0] != m:
            raise ValueError(f"B has {B.shape[0]} rows, A has {m} columns")
        p = B.shape[1]
        if C.shape != (p, n) or D.shape != (p, n):
            raise ValueError(f"C and D must be {p}x{n}, got {C.shape}, {D.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "kind_x", _kinds(self.kind_x, n, "kind_x"))
        object.__setattr__(self, "kind_y", _kinds(self.kind_y, m, "kind_y"))
        object.__setattr__(self, "kind_z", _kinds(self.kind_z, p, "kind_z"))
        if self.state_names is not None:
            names = tuple(str(s) for s in self.state_names)
            if len(names) != n:
                raise ValueError(f"{len(names)} state names for {n} states")
            object.__setattr__(self, "state_names", names)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.A.shape[1]

    @property
    def p(self) -> int:
        return self.B.shape[1]

    @property
    def s(self) -> np.ndarray:
        """Shift vector: 1 on temporal states, 0 on quantity states."""
        return indicator(self.kind_x)

    @property
    def s_y(self) -> np.ndarray:
        return indicator(self.kind_y)

    @property
    def s_z(self) -> np.ndarray:
        return indicator(self.kind_z)

    @property
    def CD(self) -> np.ndarray:
        return self.C + self.D

    @property
    def d(self) -> np.ndarray:
        """``D·s``: how much each inner variable moves per unit of growth."""
        return self.D @ self.s

    def names(self) -> tuple[str, ...]:
        if self.state_names is not None:
            return self.state_names
        return tuple(f"x{i + 1}" for i in range(self.n))


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(system: MmpsSystem) -> ValidationReport:
    """Structural checks: regularity, sentinel placement, finiteness, kinds."""
    report = ValidationReport()
    A, B = system.A, system.B
    if (A == TOP).any():
        i, j = np.argwhere(A == TOP)[0]
        report.violations.append(f"A[{i},{j}] is TOP; A may only use EPS")
    if (B == EPS).any():
        j, l = np.argwhere(B == EPS)[0]
        report.violations.append(f"B[{j},{l}] is EPS; B may only use TOP")
    for i in range(system.n):
        if not np.isfinite(A[i]).any():
            report.violations.append(f"row {i} of A not regular")
    for j in range(system.m):
        if not np.isfinite(B[j]).any():
            report.violations.append(f"row {j} of B not regular")
    for name, M in (("C", system.C), ("D", system.D)):
        if not np.isfinite(M).all():
            i, j = np.argwhere(~np.isfinite(M))[0]
            report.violations.append(f"{name}[{i},{j}] is not finite")
    for i, j in np.argwhere(np.isfinite(A)):
        if system.kind_x[i] != system.kind_y[j]:
            report.violations.append(
                f"A[{i},{j}] joins {system.kind_x[i]}-state x{i} to "
                f"{system.kind_y[j]}-intermediate y{j}")
    for j, l in np.argwhere(np.isfinite(B)):
        if system.kind_y[j] != system.kind_z[l]:
            report.violations.append(
                f"B[{j},{l}] joins {system.kind_y[j]}-intermediate y{j} to "
                f"{system.kind_z[l]}-inner z{l}")
    if TEMPORAL not in system.kind_x:
        report.violations.append("no temporal state")
    return report


def check_time_invariance(system: MmpsSystem, tol: float = 1e-9):
    """Check ``(C + D)·s = s_z``.

    Returns ``(ok, residuals)`` where ``residuals[l]`` is the signed
    deviation of inner row ``l``.
    """
    residuals = system.CD @ system.s - system.s_z
    return bool(np.all(np.abs(residuals) <= tol)), residuals


def evaluate_rhs(system: MmpsSystem, x_prev, x_cur) -> np.ndarray:
    """One evaluation of ``A ⊗ (B ⊗' (C·x_prev + D·x_cur))``."""
    x_prev = np.asarray(x_prev, dtype=float)
    x_cur = np.asarray(x_cur, dtype=float)
    if x_prev.shape != (system.n,) or x_cur.shape != (system.n,):
        raise ValueError(f"state vectors must have length {system.n}")
    z = system.C @ x_prev + system.D @ x_cur
    return maxplus_mul(system.A, minplus_mul(system.B, z))


def permute_states(system: MmpsSystem, perm) -> MmpsSystem:
    """Relabel states so that new state ``i`` is old state ``perm[i]``."""
    perm = list(perm)
    names = None if system.state_names is None else [system.state_names[i] for i in perm]
    return MmpsSystem(
        A=system.A[perm, :], B=system.B, C=system.C[:, perm], D=system.D[:, perm],
        kind_x=[system.kind_x[i] for i in perm], kind_y=system.kind_y,
        kind_z=system.kind_z, state_names=names)


__all__ = [
    "EPS", "TOP", "TEMPORAL", "QUANTITY", "MmpsSystem", "ValidationReport",
    "validate", "check_time_invariance", "evaluate_rhs", "indicator", "permute_states",
]
