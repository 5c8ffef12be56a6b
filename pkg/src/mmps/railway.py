"""Urban railway line as an implicit MMPS system.

Each station ``j`` contributes four states in the order arrival ``a_j``,
departure ``d_j``, passengers on board ``rho_j`` and passengers waiting
``sigma_j``; the first two are temporal, the last two quantities. Trains
depart station 1 every ``tau0`` time units.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .model import QUANTITY, TEMPORAL, MmpsSystem
from .tropical import EPS, TOP

X_PER_STATION = 4
Y_PER_STATION = 5
Z_PER_STATION = 6

_KIND_X = (TEMPORAL, TEMPORAL, QUANTITY, QUANTITY)
_KIND_Y = (TEMPORAL, TEMPORAL, TEMPORAL, QUANTITY, QUANTITY)
_KIND_Z = (TEMPORAL, TEMPORAL, TEMPORAL, TEMPORAL, QUANTITY, QUANTITY)


@dataclass(frozen=True)
class RailwayParams:
    J: int = 4
    rho_max: float = 150.0
    beta: float = 0.5
    tau0: float = 120.0
    tau_r: float = 120.0
    tau_H: float = 30.0
    tau_d: float = 60.0
    b: float = 2.0
    e: float = 0.5
    f: float = 2.0

    def __post_init__(self):
        problems = []
        if self.J < 2:
            problems.append("J must be >= 2")
        if not 0.0 <= self.beta <= 1.0:
            problems.append("beta must lie in [0, 1]")
        for name in ("b", "e", "f"):
            if getattr(self, name) <= 0:
                problems.append(f"{name} must be positive")
        if self.b <= self.e:
            problems.append("boarding rate b must exceed platform arrival rate e")
        if problems:
            raise ValueError("; ".join(problems))

    def with_overrides(self, **kw) -> "RailwayParams":
        types = {f.name: f.type for f in fields(self)}
        cast = {k: (int(v) if types[k] in ("int", int) else float(v)) for k, v in kw.items()}
        return replace(self, **cast)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DerivedConstants:
    mu1: float
    mu2: float
    mu3: float
    gamma1: float
    gamma2: float


def default_params() -> RailwayParams:
    return RailwayParams()


def derived_constants(params: RailwayParams) -> DerivedConstants:
    b, e, f, beta = params.b, params.e, params.f, params.beta
    return DerivedConstants(
        mu1=b / (b - e),
        mu2=(b / (b - e)) * (beta / f),
        mu3=1.0 / (b - e),
        gamma1=params.rho_max / b,
        gamma2=beta / f - (1.0 - beta) / b,
    )


def station_blocks(params: RailwayParams, first: bool) -> dict[str, np.ndarray]:
    """Blocks ``A``, ``B``, ``C``, ``Dc`` (and ``Dp`` unless ``first``) of one station."""
    k = derived_constants(params)
    E, T = EPS, TOP
    b, e, beta, f = params.b, params.e, params.beta, params.f
    if first:
        A = [[0, E, E, E, E],
             [E, E, 0, E, E],
             [E, E, E, 0, E],
             [E, E, E, E, 0]]
        B = [[params.tau0, T, T, T, T, T],
             [T, 0, T, T, T, T],
             [T, T, params.tau_d, T, T, T],
             [T, T, T, T, 0, T],
             [T, T, T, T, T, 0]]
        C = [[1, 0, 0, 0],
             [1, 0, 0, 0],
             [0, 0, 0, 0],
             [0, 0, 0, 0],
             [0, 0, 1, 0],
             [0, 0, 0, 0]]
        Dc = [[0, 0, 0, 0],
              [0, 0, 0, 0],
              [1, 0, 0, 0],
              [1, 0, 0, 0],
              [0, 0, 0, 0],
              [0, 0, 0, 0]]
        return {name: np.array(v, dtype=float) for name, v in
                (("A", A), ("B", B), ("C", C), ("Dc", Dc))}
    A = [[params.tau_r, params.tau_H, E, E, E],
         [E, E, 0, E, E],
         [E, E, E, 0, E],
         [E, E, E, E, 0]]
    B = [[0, T, T, T, T, T],
         [T, 0, T, T, T, T],
         [T, T, 0, k.gamma1, T, T],
         [T, T, T, T, 0, T],
         [T, T, T, T, T, 0]]
    C = [[0, 0, 0, 0],
         [0, 1, 0, 0],
         [0, 1 - k.mu1, 0, k.mu3],
         [0, 0, 0, 0],
         [0, 0, 0, 0],
         [0, -e, 0, 1]]
    Dc = [[0, 0, 0, 0],
          [0, 0, 0, 0],
          [k.mu1, 0, 0, 0],
          [1, 0, 0, 0],
          [-b, b, 0, 0],
          [b, e - b, 0, 0]]
    Dp = [[0, 1, 0, 0],
          [0, 0, 0, 0],
          [0, 0, k.mu2, 0],
          [0, 0, k.gamma2, 0],
          [0, 0, -b * k.gamma2, 0],
          [0, 0, b * beta / f, 0]]
    return {name: np.array(v, dtype=float) for name, v in
            (("A", A), ("B", B), ("C", C), ("Dc", Dc), ("Dp", Dp))}


def build_model(params: RailwayParams | None = None) -> MmpsSystem:
    """Assemble the block-diagonal A, B, C and block-bidiagonal D."""
    params = params or default_params()
    J = params.J
    n, m, p = X_PER_STATION * J, Y_PER_STATION * J, Z_PER_STATION * J
    A = np.full((n, m), EPS)
    B = np.full((m, p), TOP)
    C = np.zeros((p, n))
    D = np.zeros((p, n))
    for j in range(J):
        blk = station_blocks(params, first=(j == 0))
        xs = slice(X_PER_STATION * j, X_PER_STATION * (j + 1))
        ys = slice(Y_PER_STATION * j, Y_PER_STATION * (j + 1))
        zs = slice(Z_PER_STATION * j, Z_PER_STATION * (j + 1))
        A[xs, ys] = blk["A"]
        B[ys, zs] = blk["B"]
        C[zs, xs] = blk["C"]
        D[zs, xs] = blk["Dc"]
        if j > 0:
            D[zs, slice(X_PER_STATION * (j - 1), X_PER_STATION * j)] = blk["Dp"]
    names = [f"{v}_{j + 1}" for j in range(J) for v in ("a", "d", "rho", "sigma")]
    return MmpsSystem(A=A, B=B, C=C, D=D,
                      kind_x=_KIND_X * J, kind_y=_KIND_Y * J, kind_z=_KIND_Z * J,
                      state_names=names)


def scalar_step(params: RailwayParams, x_prev) -> np.ndarray:
    """Advance one train by the per-station scalar recursions.

    Written directly from the line equations (plain max/min arithmetic) and
    kept independent of :func:`build_model` so each can check the other.
    """
    k = derived_constants(params)
    b, e, f, beta = params.b, params.e, params.f, params.beta
    prev = np.asarray(x_prev, dtype=float).reshape(params.J, 4)
    cur = np.zeros_like(prev)

    a_prev, d_prev, rho_prev, _ = prev[0]
    a = a_prev + params.tau0
    cur[0] = (a, a + params.tau_d, rho_prev, 0.0)

    for j in range(1, params.J):
        _, d_up, rho_up, _ = cur[j - 1]
        _, d_prev, _, sigma_prev = prev[j]
        a = max(d_up + params.tau_r, d_prev + params.tau_H)
        d = min(k.mu1 * a + k.mu2 * rho_up + k.mu3 * sigma_prev + (1 - k.mu1) * d_prev,
                k.gamma1 + a + k.gamma2 * rho_up)
        boarded = b * (d - a - beta / f * rho_up)
        rho = (1 - beta) * rho_up + boarded
        sigma = sigma_prev + e * (d - d_prev) - boarded
        cur[j] = (a, d, rho, sigma)
    return cur.reshape(-1)


# Reference values for the default four-station line: a stationary timetable,
# a second fixed point, and one parameterisation of the fixed-point plane.
REFERENCE_X_E1 = np.array([0, 60, 120, 0, 180, 240, 120, 0,
    360, 420, 120, 0, 540, 600, 120, 0], dtype=float)
REFERENCE_X_E2 = np.array([0, 60, 0, 0, 180, 210, 60, 0,
    330, 375, 90, 0, 495, 547.5, 105, 0], dtype=float)
REFERENCE_X_P = np.array([-180, -120, -840, 0, 0, -180, -360, 0,
    -60, -120, -120, 0, 0, 0, 0, 0], dtype=float)
REFERENCE_S1 = np.array([1, 1, 0, 0] * 4, dtype=float)
REFERENCE_S2 = np.array([3, 3, -8, 0, 3, 1, -4, 0, 1, 0, -2, 0, 0, -0.5, -1, 0], dtype=float)
