import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_connected_graph, random_generator
from graphsubsample.errors import ConfigError, NumericalError, RankDeficientSelectionError
from graphsubsample.graph import normalized_laplacian
from graphsubsample.lowrank import (
    LowRankFactorization,
    approx_samp,
    approx_svd,
    compute_f,
    identity_columns,
    select_rank,
)


def rank_oracle(s, eps):
    s = np.asarray(s, dtype=float)
    total = np.sum(s**2)
    for P in range(1, len(s) + 1):
        if np.sum(s[P:] ** 2) <= eps**2 * total:
            return P
    raise AssertionError("unreachable")


@pytest.mark.parametrize(
    "s, eps, P",
    [
        ([3.0, 2.0, 1.0], 0.3, 2),
        ([3.0, 2.0, 1.0], 0.25, 3),
        ([1.0, 0.0, 0.0], 0.01, 1),
        ([1.0, 1.0, 1.0, 1.0], 0.5, 3),
        ([1.0, 1.0, 1.0, 1.0], 0.49, 4),
    ],
)
def test_select_rank_examples(s, eps, P):
    r = select_rank(s, eps)
    assert r.P == P
    assert r.discarded_energy <= eps**2 * r.total_energy


@settings(max_examples=200)
@given(
    st.lists(st.floats(0, 1e3, allow_nan=False), min_size=1, max_size=12).filter(lambda v: sum(x * x for x in v) > 0),
    st.floats(1e-3, 0.999),
)
def test_select_rank_matches_linear_scan(values, eps):
    s = sorted(values, reverse=True)
    assert select_rank(s, eps).P == rank_oracle(s, eps)


def test_select_rank_errors():
    with pytest.raises(ConfigError):
        select_rank([1.0], 0.0)
    with pytest.raises(ConfigError):
        select_rank([1.0], 1.5)
    with pytest.raises(ValueError):
        select_rank([1.0, 2.0], 0.1)
    with pytest.raises(NumericalError):
        select_rank([0.0, 0.0], 0.1)


def test_approx_svd_diagonal():
    b = np.diag([3.0, 2.0, 1.0])
    fac = approx_svd(b, 2)
    np.testing.assert_allclose(fac.b_tilde, np.diag([3.0, 2.0, 0.0]), atol=1e-15)
    assert fac.t_factor.shape == (3, 2)
    np.testing.assert_allclose(np.abs(fac.t_factor), np.eye(3)[:, :2], atol=1e-15)
    with pytest.raises(ValueError):
        approx_svd(b, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_eckart_young_error(seed):
    rng = np.random.default_rng(seed)
    b = random_generator(rng, normalized_laplacian(random_connected_graph(rng)))
    s = np.linalg.svd(b, compute_uv=False)
    P = int(rng.integers(1, b.shape[0] + 1))
    fac = approx_svd(b, P)
    assert np.linalg.norm(b - fac.b_tilde) == pytest.approx(np.sqrt(np.sum(s[P:] ** 2)), abs=1e-10 * s[0])
    np.testing.assert_allclose(fac.t_factor.T @ fac.t_factor, np.eye(P), atol=1e-12)


def test_approx_samp_by_hand():
    b = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 5.0]])
    fac = approx_samp(b, [0, 1])
    # the third row projected onto span(e1, e2)
    np.testing.assert_array_equal(fac.b_tilde, [[1, 0, 0], [0, 1, 0], [1, 1, 0]])
    np.testing.assert_array_equal(fac.t_factor, [[1, 0], [0, 1], [1, 1]])
    assert fac.selected == (0, 1)


def test_approx_samp_errors():
    b = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(RankDeficientSelectionError):
        approx_samp(b, [0, 1])
    with pytest.raises(ValueError):
        approx_samp(np.eye(3), [0, 0])
    with pytest.raises(ValueError):
        approx_samp(np.eye(3), [3])
    with pytest.raises(ValueError):
        approx_samp(np.eye(3), [])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_samp_rows_are_least_squares_projections(seed):
    rng = np.random.default_rng(seed)
    b = random_generator(rng, normalized_laplacian(random_connected_graph(rng)))
    n = b.shape[0]
    P = int(rng.integers(1, n + 1))
    sel = sorted(rng.choice(n, P, replace=False).tolist())
    bs = b[sel]
    gram = bs @ bs.T
    if np.linalg.cond(gram) > 1e8:
        return
    try:
        fac = approx_samp(b, sel)
    except RankDeficientSelectionError:
        return
    # normal-equations oracle
    proj = np.linalg.solve(gram, bs @ b.T).T @ bs
    proj[sel] = bs
    np.testing.assert_allclose(fac.b_tilde, proj, atol=1e-8 * np.abs(b).max())
    np.testing.assert_array_equal(fac.b_tilde[sel], bs)
    np.testing.assert_array_equal(fac.t_factor, fac.b_tilde[:, sel])
    assert np.linalg.matrix_rank(fac.b_tilde, tol=1e-9 * np.linalg.norm(b)) == P


def test_compute_f_and_identity_columns():
    b = np.array([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]])
    fac = approx_samp(b, [2, 0])
    f = compute_f(fac.b_tilde, fac.t_factor)
    np.testing.assert_allclose(fac.t_factor @ f, fac.b_tilde, atol=1e-12)
    assert identity_columns(f) == {2: 0, 0: 1}


def test_identity_columns_example():
    f = np.array([[1.0, 0.5, 0.0], [0.0, 0.5, 1.0 + 1e-6]])
    assert identity_columns(f) == {0: 0}
    assert identity_columns(f, atol=1e-5) == {0: 0, 2: 1}


def test_compute_f_rejects_rank_deficient_t():
    with pytest.raises(NumericalError):
        compute_f(np.eye(3), np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]]))


def test_factorization_round_trip():
    fac = approx_svd(np.diag([3.0, 2.0, 1.0]), 2)
    back = LowRankFactorization.from_dict(fac.to_dict())
    assert back.scheme == "svd" and back.P == 2
    np.testing.assert_array_equal(back.b_tilde, fac.b_tilde)
    np.testing.assert_array_equal(back.t_factor, fac.t_factor)
    np.testing.assert_array_equal(back.singular_values, fac.singular_values)
