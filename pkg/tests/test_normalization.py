import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmps.growth import FootprintPair, GrowthSolution
from mmps.model import MmpsSystem, evaluate_rhs
from mmps.normalization import (NormalizedSystem, conjugation_products, denormalize_state,
                                extract_footprint, normalize, normalize_state, solution_at,
                                verify_structure)
from mmps.railway import REFERENCE_X_E1
from randsys import random_analyzable


def same_with_sentinels(P, Q, atol=0.0):
    assert np.array_equal(np.isinf(P), np.isinf(Q))
    assert np.array_equal(P[np.isinf(P)], Q[np.isinf(Q)])
    np.testing.assert_allclose(P[np.isfinite(P)], Q[np.isfinite(Q)], atol=atol, rtol=0)


def test_railway_structure(railway_ns):
    rep = verify_structure(railway_ns)
    assert rep.ok, rep.violations


def test_zero_growth_and_zero_fixed_point(railway, railway_ns):
    z = np.zeros(railway.n)
    assert np.abs(evaluate_rhs(railway_ns.as_system(), z, z)).max() <= 1e-8


def test_matches_diagonal_products(railway, railway_sol_e1, railway_ns):
    A_t, B_t = conjugation_products(railway, railway_sol_e1)
    same_with_sentinels(A_t, railway_ns.A_tilde, atol=1e-12)
    same_with_sentinels(B_t, railway_ns.B_tilde, atol=1e-12)


def test_sentinel_pattern_preserved(railway, railway_ns):
    assert np.array_equal(np.isneginf(railway_ns.A_tilde), np.isneginf(railway.A))
    assert np.array_equal(np.isposinf(railway_ns.B_tilde), np.isposinf(railway.B))


def test_shift_invariance(railway, railway_sol_e1, railway_ns):
    for h in (-250.0, 3.5, 1e4):
        shifted = solution_at(railway, railway_sol_e1.footprint, 120.0, REFERENCE_X_E1 + h * railway.s)
        ns = normalize(railway, shifted)
        same_with_sentinels(ns.A_tilde, railway_ns.A_tilde, atol=1e-9)
        same_with_sentinels(ns.B_tilde, railway_ns.B_tilde, atol=1e-9)


def test_trivial_explicit_system(identity2):
    sol = GrowthSolution(lam=0.0, x_e=np.zeros(2), y_e=np.zeros(2), w_e=np.zeros(2),
                         footprint=FootprintPair((0, 1), (0, 1), (2, 2), (2, 2)))
    zero_b = identity2.B - np.where(np.isfinite(identity2.B), 1.0, 0.0)
    sys0 = MmpsSystem(A=identity2.A, B=zero_b, C=identity2.C, D=identity2.D)
    ns = normalize(sys0, sol)
    same_with_sentinels(ns.A_tilde, sys0.A)
    same_with_sentinels(ns.B_tilde, sys0.B)


def test_footprint_from_zero_pattern(railway_ns, railway_sol):
    assert extract_footprint(railway_ns) == [railway_sol.footprint]


def test_bad_solution_rejected(railway, railway_sol_e1):
    bad = GrowthSolution(lam=100.0, x_e=railway_sol_e1.x_e, y_e=railway_sol_e1.y_e,
                         w_e=railway_sol_e1.w_e, footprint=railway_sol_e1.footprint)
    with pytest.raises(ValueError):
        normalize(railway, bad)


def _toy(A_t, B_t, railway_ns):
    return NormalizedSystem(A_tilde=np.array(A_t, float), B_tilde=np.array(B_t, float),
                            source=railway_ns.source, source_lambda=0.0,
                            source_solution=railway_ns.source_solution)


def test_verify_structure_flags(railway_ns):
    A_t = railway_ns.A_tilde.copy()
    A_t[0, 0] = 0.5
    rep = verify_structure(_toy(A_t, railway_ns.B_tilde, railway_ns))
    assert any("A_tilde[0,0]" in v for v in rep.violations)
    A_t = railway_ns.A_tilde.copy()
    A_t[1][np.isfinite(A_t[1])] = -1.0
    rep = verify_structure(_toy(A_t, railway_ns.B_tilde, railway_ns))
    assert any("no zero in row 1" in v for v in rep.violations)


def test_multiple_zeros_give_multiple_footprints(railway_ns):
    A_t = railway_ns.A_tilde.copy()
    row = 4     # a headway row with two finite entries
    A_t[row][np.isfinite(A_t[row])] = 0.0
    fps = extract_footprint(_toy(A_t, railway_ns.B_tilde, railway_ns))
    assert len(fps) == 2
    assert fps[0].a_sel[row] < fps[1].a_sel[row]
    assert fps[0].b_sel == fps[1].b_sel


def test_denormalize(railway, railway_ns):
    np.testing.assert_array_equal(denormalize_state(railway_ns, np.zeros(16), 0), REFERENCE_X_E1)
    np.testing.assert_array_equal(denormalize_state(railway_ns, np.zeros(16), 3),
                                  REFERENCE_X_E1 + 360 * railway.s)
    x = np.random.default_rng(0).normal(size=16)
    np.testing.assert_allclose(normalize_state(railway_ns, denormalize_state(railway_ns, x, 5), 5), x,
                               atol=1e-12)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_random_structure(seed):
    system, rep = random_analyzable(np.random.default_rng(seed))
    for sol in rep.solutions:
        ns = normalize(system, sol)
        assert verify_structure(ns).ok
        assert sol.footprint in extract_footprint(ns)
        z = np.zeros(system.n)
        assert np.abs(evaluate_rhs(ns.as_system(), z, z)).max() <= 1e-8
        A_t, B_t = conjugation_products(system, sol)
        same_with_sentinels(A_t, ns.A_tilde, atol=1e-9)
        same_with_sentinels(B_t, ns.B_tilde, atol=1e-9)
