import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmps.model import check_time_invariance, evaluate_rhs, validate
from mmps.railway import (REFERENCE_X_E1, REFERENCE_X_E2, RailwayParams, build_model,
                          default_params, derived_constants, scalar_step)
from mmps.simulator import step
from mmps.solvability import certify


def test_defaults():
    p = default_params()
    assert (p.J, p.rho_max, p.beta, p.tau0, p.tau_r, p.tau_H, p.tau_d, p.b, p.e, p.f) == \
        (4, 150, 0.5, 120, 120, 30, 60, 2, 0.5, 2)


def test_derived_constants():
    k = derived_constants(default_params())
    assert (k.mu1, k.mu2, k.mu3, k.gamma1, k.gamma2) == pytest.approx((4 / 3, 1 / 3, 2 / 3, 75, 0))


@pytest.mark.parametrize("kw", [{"J": 1}, {"beta": 1.5}, {"b": 0.4}, {"f": 0.0}])
def test_invalid_params(kw):
    with pytest.raises(ValueError):
        RailwayParams(**kw)


def test_overrides_cast_types():
    p = default_params().with_overrides(J="3", tau_H="45")
    assert p.J == 3 and isinstance(p.J, int) and p.tau_H == 45.0


@pytest.mark.parametrize("J", [2, 3, 4, 7])
def test_models_validate(J):
    sys_ = build_model(RailwayParams(J=J))
    assert (sys_.n, sys_.m, sys_.p) == (4 * J, 5 * J, 6 * J)
    assert validate(sys_).ok
    assert check_time_invariance(sys_)[0]
    assert certify(sys_)


def test_state_layout(railway):
    assert railway.names()[:4] == ("a_1", "d_1", "rho_1", "sigma_1")
    assert railway.kind_x[:4] == ("t", "t", "q", "q")


def test_reference_points_are_fixed_points(railway):
    p = default_params()
    for x in (REFERENCE_X_E1, REFERENCE_X_E2):
        target = x + 120.0 * railway.s
        np.testing.assert_allclose(scalar_step(p, x), target, atol=1e-9)
        np.testing.assert_allclose(evaluate_rhs(railway, x, target), target, atol=1e-9)


@given(st.integers(0, 10_000), st.sampled_from([2, 3, 4, 5]))
@settings(max_examples=60, deadline=None)
def test_matrix_model_matches_scalar_recursion(seed, J):
    params = RailwayParams(J=J)
    system = build_model(params)
    cert = certify(system)
    x = np.random.default_rng(seed).uniform(-500, 500, 4 * J)
    np.testing.assert_allclose(step(system, cert, x), scalar_step(params, x), atol=1e-8, rtol=0)


def test_scalar_recursion_other_parameters():
    params = RailwayParams(J=3, rho_max=90, beta=0.3, tau_H=50, b=3.0, e=1.0, f=1.5)
    system = build_model(params)
    cert = certify(system)
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = rng.uniform(-200, 200, 12)
        np.testing.assert_allclose(step(system, cert, x), scalar_step(params, x), atol=1e-8, rtol=0)
