import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mmps.tropical import (EPS, TOP, conv_mul, diag_tropical, hilbert_norm, irregular_rows,
                           is_regular, kron_ones, maxplus_mul, minplus_mul, vec_rowmajor)


def loop_maxplus(A, C):
    n, k = A.shape
    out = np.full((n, C.shape[1]), EPS)
    for i in range(n):
        for j in range(C.shape[1]):
            for q in range(k):
                if A[i, q] == EPS or C[q, j] == EPS:
                    continue
                out[i, j] = max(out[i, j], A[i, q] + C[q, j])
    return out


def loop_minplus(A, C):
    n, k = A.shape
    out = np.full((n, C.shape[1]), TOP)
    for i in range(n):
        for j in range(C.shape[1]):
            for q in range(k):
                if A[i, q] == TOP or C[q, j] == TOP:
                    continue
                out[i, j] = min(out[i, j], A[i, q] + C[q, j])
    return out


def test_scalar_examples():
    assert maxplus_mul([[1, 2]], [[3], [0]])[0, 0] == 4
    assert minplus_mul([[1, 2]], [[3], [0]])[0, 0] == 2
    assert maxplus_mul([[EPS]], [[5]])[0, 0] == EPS
    assert minplus_mul([[TOP]], [[5]])[0, 0] == TOP


def test_sentinels_absorb_each_other():
    # EPS beats TOP in max-plus, TOP beats EPS in min-plus
    assert maxplus_mul([[EPS, 1.0]], [[TOP], [2.0]])[0, 0] == 3.0
    assert maxplus_mul([[EPS]], [[TOP]])[0, 0] == EPS
    assert minplus_mul([[TOP]], [[EPS]])[0, 0] == TOP


def test_vector_operand_stays_1d():
    out = maxplus_mul(np.array([[0.0, 1.0], [EPS, 2.0]]), np.array([3.0, 4.0]))
    assert out.shape == (2,)
    np.testing.assert_array_equal(out, [5.0, 6.0])


def test_shape_mismatch():
    with pytest.raises(ValueError):
        maxplus_mul(np.zeros((2, 3)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        conv_mul(np.zeros((2, 2)), np.array([1.0, np.inf]))


finite = st.floats(-1e3, 1e3, allow_nan=False)


@st.composite
def pair(draw, sentinel):
    n, k, m = (draw(st.integers(1, 6)) for _ in range(3))
    A = draw(arrays(float, (n, k), elements=finite))
    C = draw(arrays(float, (k, m), elements=finite))
    A[draw(arrays(bool, (n, k)))] = sentinel
    C[draw(arrays(bool, (k, m)))] = sentinel
    return A, C


@given(pair(EPS))
@settings(max_examples=150)
def test_maxplus_matches_loops(data):
    A, C = data
    np.testing.assert_array_equal(maxplus_mul(A, C), loop_maxplus(A, C))


@given(pair(TOP))
@settings(max_examples=150)
def test_minplus_matches_loops(data):
    A, C = data
    np.testing.assert_array_equal(minplus_mul(A, C), loop_minplus(A, C))


@given(pair(EPS))
@settings(max_examples=50)
def test_maxplus_associative(data):
    A, C = data
    rng = np.random.default_rng(0)
    E = rng.integers(-5, 5, size=(C.shape[1], 3)).astype(float)
    A = np.round(A)
    C = np.round(C)
    np.testing.assert_array_equal(maxplus_mul(maxplus_mul(A, C), E), maxplus_mul(A, maxplus_mul(C, E)))


def test_diag_inverse():
    v = np.array([1.0, -2.0, 3.5])
    for flavor, mul in (("max", maxplus_mul), ("min", minplus_mul)):
        I = mul(diag_tropical(v, flavor), diag_tropical(-v, flavor))
        np.testing.assert_array_equal(np.diag(I), 0.0)
        off = I[~np.eye(3, dtype=bool)]
        assert np.all(off == (EPS if flavor == "max" else TOP))
    with pytest.raises(ValueError):
        diag_tropical([1.0], "plus")


def test_kron_and_vec():
    A = np.array([[1, 2], [3, 4]], dtype=float)
    np.testing.assert_array_equal(kron_ones(A, 2, "right"), [[1, 2], [1, 2], [3, 4], [3, 4]])
    np.testing.assert_array_equal(kron_ones(A, 2, "left"), [[1, 2], [3, 4], [1, 2], [3, 4]])
    np.testing.assert_array_equal(kron_ones(A, 2, "right"), np.kron(A, np.ones((2, 1))))
    np.testing.assert_array_equal(kron_ones(A, 2, "left"), np.kron(np.ones((2, 1)), A))
    np.testing.assert_array_equal(vec_rowmajor(A), [1, 2, 3, 4])


@given(arrays(float, st.integers(1, 8), elements=finite), finite)
def test_hilbert_norm_translation_invariant(x, c):
    assert hilbert_norm(x) >= 0
    assert hilbert_norm(x + c) == pytest.approx(hilbert_norm(x), abs=1e-9)


def test_hilbert_norm_empty():
    with pytest.raises(ValueError):
        hilbert_norm([])


def test_regularity():
    A = np.array([[0.0, EPS], [EPS, EPS]])
    assert not is_regular(A)
    assert irregular_rows(A) == [1]
    assert is_regular(np.array([[TOP, 1.0]]), sentinel=TOP)
