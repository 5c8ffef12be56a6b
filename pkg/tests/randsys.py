"""Random small MMPS systems for property tests."""

from __future__ import annotations

import numpy as np

from mmps.growth import solve_all
from mmps.model import MmpsSystem, QUANTITY, TEMPORAL, check_time_invariance, validate
from mmps.solvability import NotSolvable, certify
from mmps.tropical import EPS, TOP


def _kinds(rng, size, first_temporal=False):
    kinds = [TEMPORAL if rng.random() < 0.7 else QUANTITY for _ in range(size)]
    if first_temporal:
        kinds[0] = TEMPORAL
    return kinds


def _grid(rng, shape, step=0.5, lo=-4, hi=4):
    return rng.integers(int(lo / step), int(hi / step) + 1, size=shape) * step


def _covering_kinds(rng, upstream, size):
    """Kinds for the next layer, containing every kind present upstream."""
    need = sorted(set(upstream))
    out = need + _kinds(rng, size - len(need))
    return [out[k] for k in rng.permutation(size)]


def _masked(rng, rows, cols, sentinel):
    """Random grid entries where kinds agree, ``sentinel`` elsewhere; every row regular."""
    M = np.where(rng.random((len(rows), len(cols))) < 0.5, _grid(rng, (len(rows), len(cols))), sentinel)
    for i, k in enumerate(rows):
        same = [j for j, c in enumerate(cols) if c == k]
        M[i, [j for j, c in enumerate(cols) if c != k]] = sentinel
        if not np.isfinite(M[i]).any():
            M[i, rng.choice(same)] = float(_grid(rng, ()))
    return M


def random_system(rng, n=None, max_n=6) -> MmpsSystem:
    """A kind-consistent, time-invariant system; not necessarily solvable."""
    n = n or int(rng.integers(1, max_n + 1))
    m = int(rng.integers(max(2, n), n + 3))
    p = int(rng.integers(max(2, m - 1), m + 3))
    kx = _kinds(rng, n, first_temporal=True)
    ky = _covering_kinds(rng, kx, m)
    kz = _covering_kinds(rng, ky, p)
    A = _masked(rng, kx, ky, EPS)
    B = _masked(rng, ky, kz, TOP)
    s = np.array([k == TEMPORAL for k in kx], dtype=float)
    C = np.where(rng.random((p, n)) < 0.4, _grid(rng, (p, n), lo=-1, hi=1), 0.0)
    D = np.where(rng.random((p, n)) < 0.25, _grid(rng, (p, n), lo=-1, hi=1), 0.0)
    temporal_cols = np.flatnonzero(s)
    for l in range(p):
        target = 1.0 if kz[l] == TEMPORAL else 0.0
        c0 = int(rng.choice(temporal_cols))
        C[l, c0] += target - (C[l] + D[l]) @ s
    return MmpsSystem(A=A, B=B, C=C, D=D, kind_x=kx, kind_y=ky, kind_z=kz)


def random_analyzable(rng, max_n=6, tries=200):
    """A solvable system with at least one feasible footprint LP, with its report."""
    for _ in range(tries):
        sys_ = random_system(rng, max_n=max_n)
        if not validate(sys_).ok or not check_time_invariance(sys_)[0]:
            continue
        if isinstance(certify(sys_), NotSolvable):
            continue
        if np.prod([np.isfinite(r).sum() for r in sys_.A]) * \
                np.prod([np.isfinite(r).sum() for r in sys_.B]) > 4096:
            continue
        rep = solve_all(sys_)
        if rep.solutions:
            return sys_, rep
    raise RuntimeError("no analyzable random system found")
