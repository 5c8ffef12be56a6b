"""Eigenvalues of the local linear model and the resulting stability verdict.

Eigenvalues come from a Householder reduction to Hessenberg form followed by
Francis double-shift QR iteration. A linearized system is stable when no
eigenvalue lies outside the unit circle and every eigenvalue on it is
semisimple. The verdict is local: it only describes motion inside the
linearization region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fixedpoints import FixedPointSet
from .growth import FootprintPair
from .linalg import rank

UNIT_TOL = 1e-8
CLUSTER_TOL = 1e-6
_EPS = np.finfo(float).eps


class EigenConvergenceError(RuntimeError):
    def __init__(self, message: str, found: list[complex]):
        super().__init__(message)
        self.found = found


def hessenberg(M) -> np.ndarray:
    """Upper Hessenberg matrix similar to ``M`` (Householder reflections)."""
    H = np.array(M, dtype=float)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x
        v[0] += math.copysign(alpha, x[0])
        v /= np.linalg.norm(v)
        H[k + 1:, k:] -= 2.0 * np.outer(v, v @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v)
        H[k + 2:, k] = 0.0
    return H


def _hqr(a: np.ndarray, max_sweeps: int) -> list[complex]:
    """Eigenvalues of an upper Hessenberg matrix by implicit double-shift QR."""
    n = a.shape[0]
    wr = np.zeros(n)
    wi = np.zeros(n)
    anorm = float(np.sum(np.abs(np.triu(a, -1))))
    nn = n - 1
    t = 0.0

    def found():
        return [complex(wr[i], wi[i]) for i in range(nn + 1, n)]

    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs(a[l, l - 1]) <= _EPS * s:
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                wr[nn], wi[nn] = x + t, 0.0
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = wi[nn] = 0.0
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1], wi[nn] = -z, z
                nn -= 2
                break
            if its >= max_sweeps:
                raise EigenConvergenceError(f"QR iteration did not converge after {its} sweeps", found())
            if its in (10, 20):
                # exceptional shift to break cycles
                t += x
                for i in range(nn + 1):
                    a[i, i] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = y = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p, q, r = p / s, q / s, r / s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u <= _EPS * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = a[k + 2, k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p, q, r = p / x, q / x, r / x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        a[k, k - 1] = -a[k, k - 1]
                else:
                    a[k, k - 1] = -s * x
                p += s
                x, y, z = p / s, q / s, r / s
                q, r = q / p, r / p
                for j in range(k, nn + 1):
                    p = a[k, j] + q * a[k + 1, j]
                    if k != nn - 1:
                        p += r * a[k + 2, j]
                        a[k + 2, j] -= p * z
                    a[k + 1, j] -= p * y
                    a[k, j] -= p * x
                for i in range(l, min(nn, k + 3) + 1):
                    p = x * a[i, k] + y * a[i, k + 1]
                    if k != nn - 1:
                        p += z * a[i, k + 2]
                        a[i, k + 2] -= p * r
                    a[i, k + 1] -= p * q
                    a[i, k] -= p
    return [complex(wr[i], wi[i]) for i in range(n)]


@dataclass
class UnitEigenvalue:
    value: complex
    algebraic: int
    geometric: int

    @property
    def semisimple(self) -> bool:
        return self.algebraic == self.geometric


@dataclass
class Spectrum:
    eigenvalues: list[complex]
    unit: list[UnitEigenvalue] = field(default_factory=list)

    @property
    def spectral_radius(self) -> float:
        return max((abs(mu) for mu in self.eigenvalues), default=0.0)


def eigenvalues(M, max_sweeps: int | None = None) -> list[complex]:
    """All eigenvalues of a real square matrix, sorted by decreasing modulus."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValueError("eigenvalues need a non-empty square matrix")
    if not np.isfinite(M).all():
        raise ValueError("matrix has non-finite entries")
    n = M.shape[0]
    mus = _hqr(hessenberg(M), max_sweeps or 30 * n)
    return sorted(mus, key=lambda mu: (-abs(mu), -mu.real, mu.imag))


def geometric_multiplicity(M, mu: complex, tol: float = UNIT_TOL) -> int:
    M = np.asarray(M, dtype=complex)
    return M.shape[0] - rank(M - mu * np.eye(M.shape[0]), tol)


def _cluster(values: list[complex], tol: float) -> list[list[complex]]:
    groups: list[list[complex]] = []
    for mu in values:
        for g in groups:
            if abs(mu - g[0]) <= tol:
                g.append(mu)
                break
        else:
            groups.append([mu])
    return groups


def spectrum(M, unit_tol: float = UNIT_TOL) -> Spectrum:
    """Eigenvalues plus multiplicities of those on the unit circle."""
    mus = eigenvalues(M)
    on_circle = [mu for mu in mus if abs(abs(mu) - 1.0) <= unit_tol]
    unit = []
    for group in _cluster(on_circle, CLUSTER_TOL):
        centre = complex(np.mean(group))
        if abs(centre.imag) <= unit_tol:
            centre = complex(centre.real, 0.0)
        unit.append(UnitEigenvalue(centre, len(group), geometric_multiplicity(M, centre, unit_tol)))
    return Spectrum(eigenvalues=mus, unit=unit)


@dataclass
class StabilityReport:
    verdict: str
    reasons: list[str]
    unit_eigen_count: int
    spectrum: Spectrum
    footprint: FootprintPair | None = None
    n: int = 0
    scope: str = "local, region-restricted"

    @property
    def stable(self) -> bool:
        return self.verdict == "Stable"


def classify(M, unit_tol: float = UNIT_TOL, shift=None, footprint: FootprintPair | None = None) -> StabilityReport:
    """Spectral stability verdict for ``x̃(k) = M·x̃(k-1)``.

    When ``shift`` is given and ``M·shift = shift``, the presence of a unit
    eigenvalue at 1 is cross-checked.
    """
    M = np.asarray(M, dtype=float)
    sp = spectrum(M, unit_tol)
    reasons = []
    for mu in sp.eigenvalues:
        if abs(mu) > 1.0 + unit_tol:
            reasons.append(f"eigenvalue {mu:.6g} has modulus {abs(mu):.6g} > 1")
    for u in sp.unit:
        if not u.semisimple:
            reasons.append(f"unit eigenvalue {u.value:.6g} is defective "
                           f"(algebraic {u.algebraic}, geometric {u.geometric})")
    if shift is not None:
        shift = np.asarray(shift, dtype=float)
        if np.abs(M @ shift - shift).max() <= 1e-9 * max(1.0, np.abs(shift).max()):
            if not any(abs(u.value - 1.0) <= unit_tol for u in sp.unit):
                reasons.append("M fixes the shift direction but no eigenvalue 1 was found")
    count = sum(u.algebraic for u in sp.unit)
    return StabilityReport(verdict="Unstable" if reasons else "Stable", reasons=reasons,
                           unit_eigen_count=count, spectrum=sp, footprint=footprint,
                           n=M.shape[0])


@dataclass
class CorollaryCheck:
    passed: bool
    unit_eigen_count: int
    rank_deficiency: int
    message: str = ""

    def __bool__(self) -> bool:
        return self.passed


def corollary_check(report: StabilityReport, fps: FixedPointSet) -> CorollaryCheck:
    """Number of unit eigenvalues against the rank deficiency of ``H_eq``."""
    fc = fps.constraints
    deficiency = fc.H_eq.shape[1] - fps.rank_Heq
    if report.footprint is not None and report.footprint != fc.footprint:
        return CorollaryCheck(False, report.unit_eigen_count, deficiency,
                              "input error: report and fixed-point set use different footprints")
    if report.n and report.n != fps.n:
        return CorollaryCheck(False, report.unit_eigen_count, deficiency,
                              "input error: state dimensions differ")
    ok = report.unit_eigen_count == deficiency
    return CorollaryCheck(ok, report.unit_eigen_count, deficiency,
                          "" if ok else "unit eigenvalue count differs from rank deficiency")
