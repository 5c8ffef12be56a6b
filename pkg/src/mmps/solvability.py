"""Whether the implicit equation ``x(k) = F(x(k-1), x(k))`` can be evaluated explicitly.

State ``i`` depends on state ``q`` at the same cycle when some path
``A[i,j] -> B[j,l] -> D[l,q]`` is non-trivial. If the dependency digraph is
acyclic, evaluating states in topological order gives the unique solution.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .model import MmpsSystem


@dataclass(frozen=True)
class StructureMatrices:
    S_A: np.ndarray
    S_B: np.ndarray
    S_D: np.ndarray


@dataclass(frozen=True)
class SolvabilityCertificate:
    order: tuple[int, ...]
    T: np.ndarray
    S: np.ndarray

    def reordered(self) -> np.ndarray:
        """``T·S·T⁻¹``; strictly lower triangular by construction."""
        return self.T @ self.S @ self.T.T


@dataclass(frozen=True)
class NotSolvable:
    """No evaluation order exists under the acyclicity criterion."""

    cycle: tuple[int, ...]
    S: np.ndarray

    def __bool__(self) -> bool:
        return False


def structure_matrices(system: MmpsSystem) -> StructureMatrices:
    return StructureMatrices(
        S_A=(~np.isneginf(system.A)).astype(int),
        S_B=(~np.isposinf(system.B)).astype(int),
        S_D=(system.D != 0).astype(int),
    )


def dependency_matrix(sm: StructureMatrices) -> np.ndarray:
    return ((sm.S_A @ sm.S_B @ sm.S_D) > 0).astype(int)


def _find_cycle(S: np.ndarray, nodes: set[int]) -> tuple[int, ...]:
    """A directed cycle among ``nodes`` (arc ``q -> i`` when ``S[i,q]``)."""
    for i in sorted(nodes):
        if S[i, i]:
            return (i, i)
    succ = {q: [i for i in sorted(nodes) if S[i, q]] for q in nodes}
    color = dict.fromkeys(nodes, 0)
    for start in sorted(nodes):
        if color[start]:
            continue
        stack = [(start, iter(succ[start]))]
        path = [start]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
                path.pop()
            elif color[nxt] == 1:
                k = path.index(nxt)
                return tuple(path[k:]) + (nxt,)
            elif color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
                path.append(nxt)
    raise AssertionError("no cycle found among unsorted nodes")


def find_certificate(S) -> SolvabilityCertificate | NotSolvable:
    """Kahn's topological sort, smallest index first among ready states."""
    S = (np.asarray(S) != 0).astype(int)
    n = S.shape[0]
    indeg = S.sum(axis=1).astype(int)
    ready = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        q = heapq.heappop(ready)
        order.append(q)
        for i in np.flatnonzero(S[:, q]):
            indeg[i] -= 1
            if indeg[i] == 0:
                heapq.heappush(ready, int(i))
    if len(order) < n:
        return NotSolvable(cycle=_find_cycle(S, set(range(n)) - set(order)), S=S)
    T = np.zeros((n, n), dtype=int)
    T[np.arange(n), order] = 1
    return SolvabilityCertificate(order=tuple(order), T=T, S=S)


def certify(system: MmpsSystem) -> SolvabilityCertificate | NotSolvable:
    return find_certificate(dependency_matrix(structure_matrices(system)))
