import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmps.fixedpoints import (build_constraints, fixed_point_set, membership, reparameterize,
                              shift_direction, sigma_bounds)
from mmps.growth import solve_all
from mmps.model import evaluate_rhs
from mmps.railway import REFERENCE_S1, REFERENCE_S2, REFERENCE_X_E1, REFERENCE_X_E2, REFERENCE_X_P
from randsys import random_analyzable


def projection_residual(X, Y):
    """Largest residual of projecting the columns of Y onto span(X)."""
    coef, *_ = np.linalg.lstsq(X, Y, rcond=None)
    return float(np.abs(X @ coef - Y).max())


@pytest.fixture(scope="module")
def fps(railway, railway_sol):
    return fixed_point_set(railway, railway_sol)


def test_constraint_shapes(fps):
    fc = fps.constraints
    assert fc.H_eq.shape == (60, 60)
    assert fc.H_ineq.shape == (6, 60)


def test_rank_and_directions(fps):
    assert fps.rank_Heq == 58
    assert fps.num_directions == 2


def test_first_direction_is_shift(railway, fps):
    np.testing.assert_array_equal(fps.directions[:, 0], shift_direction(railway, fps.constraints.footprint))
    assert np.abs(fps.constraints.H_ineq @ fps.directions[:, 0]).max() <= 1e-9
    assert abs(fps.directions[:, 1] @ fps.directions[:, 0]) <= 1e-9
    assert np.abs(fps.directions[:, 1]).max() == pytest.approx(1.0)


def test_null_space_property(fps):
    fc = fps.constraints
    rng = np.random.default_rng(0)
    for _ in range(10):
        v = fps.point(rng.normal(size=2) * 100)
        assert np.abs(fc.H_eq @ v - fc.h_eq).max() <= 1e-8


def test_span_matches_reference(fps):
    R = np.column_stack([REFERENCE_S1, REFERENCE_S2])
    assert projection_residual(fps.x_directions, R) <= 1e-8
    assert projection_residual(R, fps.x_directions) <= 1e-8


def test_reference_points_lie_on_the_affine_hull(railway, fps):
    # x_p itself may violate the inequalities, but it solves the equalities
    v = reparameterize(fps, railway, REFERENCE_X_P, np.column_stack([REFERENCE_S1, REFERENCE_S2]))
    np.testing.assert_allclose(v.x_point([540, -120]), REFERENCE_X_E1, atol=1e-9)


def test_membership(fps):
    assert membership(fps, REFERENCE_X_E1, tol=1e-6)
    assert membership(fps, REFERENCE_X_E2, tol=1e-6)
    assert membership(fps, REFERENCE_X_E1 + 1000 * REFERENCE_S1)
    bumped = REFERENCE_X_E1.copy()
    bumped[15] += 1.0
    assert not membership(fps, bumped)


def test_sampled_points_are_fixed_points(railway, fps):
    lam = fps.constraints.lam
    lo, hi = sigma_bounds(fps)[1]
    for t in np.linspace(-400, 400, 5):
        for s2 in np.linspace(hi - 200, hi, 5):
            x = fps.x_point([t, s2])
            target = x + lam * railway.s
            np.testing.assert_allclose(evaluate_rhs(railway, x, target), target, atol=1e-7)


def test_shift_axis_unbounded(fps):
    assert sigma_bounds(fps)[0] == (-np.inf, np.inf)


def test_identity_system_constraints(identity2):
    rep = solve_all(identity2)
    fc = build_constraints(identity2, rep.solutions[0].footprint, 1.0)
    assert fc.H_eq.shape == (6, 6) and fc.H_ineq.shape == (0, 6)
    fp = fixed_point_set(identity2, rep.solutions[0])
    assert fp.rank_Heq == 4 and fp.num_directions == 2
    assert projection_residual(fp.x_directions, np.eye(2)) <= 1e-12
    assert sigma_bounds(fp) == [(-np.inf, np.inf), (-np.inf, np.inf)]


def test_reparameterize_rejects_foreign_origin(railway, fps):
    with pytest.raises(ValueError):
        reparameterize(fps, railway, REFERENCE_X_E1 + np.eye(16)[3], np.column_stack([REFERENCE_S1]))


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_random_systems(seed):
    system, rep = random_analyzable(np.random.default_rng(seed))
    for sol in rep.solutions:
        fps = fixed_point_set(system, sol)
        assert fps.num_directions == system.n + system.m + system.p - fps.rank_Heq >= 1
        assert np.abs(fps.constraints.H_ineq @ fps.directions[:, 0]).max(initial=0.0) <= 1e-9
        assert membership(fps, sol.x_e)
        assert membership(fps, sol.x_e + 7.0 * system.s)
