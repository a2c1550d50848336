import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_connected_graph, random_generator
from graphsubsample.errors import NumericalError, SingularOperatorError
from graphsubsample.graph import normalized_laplacian
from graphsubsample.lowrank import LowRankFactorization, approx_samp, approx_svd
from graphsubsample.reconstruct import (
    DB_FLOOR,
    SubsamplingOperator,
    error_report,
    reconstruct,
    subsample,
)
from graphsubsample.selection import greedy_select


def test_subsample_keeps_operator_order():
    y = np.arange(12.0).reshape(4, 3)
    op = SubsamplingOperator((3, 1), 4)
    np.testing.assert_array_equal(subsample(y, op), y[[3, 1]])
    np.testing.assert_array_equal(op.matrix() @ y, y[[3, 1]])
    with pytest.raises(ValueError):
        subsample(np.ones((3, 2)), op)


def test_operator_validation():
    with pytest.raises(ValueError):
        SubsamplingOperator((), 3)
    with pytest.raises(ValueError):
        SubsamplingOperator((1, 1), 3)
    with pytest.raises(IndexError):
        SubsamplingOperator((3,), 3)


def test_two_node_exact(two_node_b):
    # B = [[1,-1],[-1,1]] has rank one; either node recovers the other
    c = np.random.default_rng(3).standard_normal((2, 7))
    y = two_node_b @ c
    for node in (0, 1):
        op = SubsamplingOperator((node,), 2)
        for fac in (approx_samp(two_node_b, op.selected), approx_svd(two_node_b, 1)):
            y_hat = reconstruct(op.apply(y), fac, op)
            np.testing.assert_allclose(y_hat, y, atol=1e-13)
            assert error_report(y, y_hat, two_node_b, fac, c, op).error_db <= -250


def test_rank_one_interpolation_by_hand():
    u = np.array([1.0, 2.0, 3.0])
    b = np.outer(u, u)
    op = SubsamplingOperator((1,), 3)
    fac = approx_samp(b, op.selected)
    # T = B[:, 1] = 2u and A_S T = 4, so y_hat = [0.5, 1, 1.5] * y_1
    y_hat = reconstruct(np.array([[8.0]]), fac, op)
    np.testing.assert_allclose(y_hat.ravel(), [4.0, 8.0, 12.0], atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_full_selection_is_exact(seed):
    rng = np.random.default_rng(seed)
    b = random_generator(rng, normalized_laplacian(random_connected_graph(rng, n_range=(3, 8))))
    n = b.shape[0]
    c = rng.standard_normal((n, 20))
    y = b @ c
    if np.linalg.norm(y) == 0 or np.linalg.cond(b) > 1e6:
        return
    op = SubsamplingOperator(tuple(range(n)), n)
    for fac in (approx_svd(b, n), approx_samp(b, op.selected)):
        rep = error_report(y, reconstruct(op.apply(y), fac, op), b, fac, c, op)
        assert rep.error_db <= -180


def _identity_fac():
    t = np.array([[1.0], [0.0]])
    return LowRankFactorization("svd", 1, np.diag([1.0, 0.0]), t)


def test_error_db_by_hand():
    y = np.array([[10.0], [0.0]])
    y_hat = np.array([[10.0], [1.0]])
    rep = error_report(y, y_hat, None, _identity_fac(), None, SubsamplingOperator((0,), 2))
    assert rep.error_db == pytest.approx(-20.0, abs=1e-12)
    assert rep.relative_error == pytest.approx(0.1)
    assert rep.low_rank_term is None and rep.sampling_term is None
    assert rep.condition_ast == 1.0


def test_error_db_floor():
    y = np.array([[1.0], [2.0]])
    rep = error_report(y, y.copy(), None, _identity_fac(), None, SubsamplingOperator((0,), 2))
    assert rep.error_db == DB_FLOOR


def test_zero_signal_rejected():
    with pytest.raises(NumericalError):
        error_report(np.zeros((2, 1)), np.zeros((2, 1)), None, _identity_fac(), None, SubsamplingOperator((0,), 2))


def test_singular_operator_carries_selection():
    b = np.diag([1.0, 0.5, 0.0])
    fac = approx_svd(b, 1)
    op = SubsamplingOperator((1,), 3)
    with pytest.raises(SingularOperatorError) as info:
        reconstruct(np.ones((1, 4)), fac, op)
    assert info.value.selected == (1,)
    assert "singular sampling operator" in str(info.value)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["svd", "samp"]))
def test_triangle_bound_and_zero_sampling_term(seed, scheme):
    rng = np.random.default_rng(seed)
    b = random_generator(rng, normalized_laplacian(random_connected_graph(rng, n_range=(3, 10))))
    n = b.shape[0]
    P = int(rng.integers(1, n + 1))
    c = rng.standard_normal((n, 16))
    y = b @ c
    if np.linalg.norm(y) == 0:
        return
    svd_fac = approx_svd(b, P)
    sel = greedy_select(svd_fac.b_tilde if scheme == "svd" else b, P, scheme).selected
    op = SubsamplingOperator(sel, n)
    try:
        fac = svd_fac if scheme == "svd" else approx_samp(b, sel)
        y_hat = reconstruct(op.apply(y), fac, op)
    except (SingularOperatorError, NumericalError):
        return
    # error_report itself raises if either invariant fails
    rep = error_report(y, y_hat, b, fac, c, op)
    err = np.linalg.norm(y - y_hat)
    assert err <= rep.low_rank_term + rep.sampling_term + 1e-9 * np.linalg.norm(y)
    if scheme == "samp":
        assert rep.sampling_term <= 1e-9 * np.linalg.norm(y)
