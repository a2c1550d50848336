import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphsubsample.errors import ConfigError
from graphsubsample.generator import (
    GeneratorSpec,
    SignalSpec,
    build_generator,
    generate_signals,
    load_signals,
    save_signals,
    signal_correlation,
    signals_from_csv,
    signals_to_csv,
    synthesize_coefficients,
)
from graphsubsample.graph import GraphTemplate, build_graph, normalized_laplacian
from graphsubsample.numerics import numerical_rank


def test_order_one_is_scaled_laplacian():
    lap = np.array([[1.0, -1.0], [-1.0, 1.0]])
    np.testing.assert_array_equal(build_generator(lap, GeneratorSpec(1, (2.0,))), 2 * lap)


def test_two_term_polynomial_by_hand():
    lap = np.array([[1.0, -1.0], [-1.0, 1.0]])
    # L^2 = 2 L, so gamma = (1, 3) gives B = 7 L
    np.testing.assert_allclose(build_generator(lap, GeneratorSpec(2, (1.0, 3.0))), 7 * lap, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**31), st.integers(1, 5))
def test_spectral_mapping(n, seed, order):
    lap = normalized_laplacian(build_graph(GraphTemplate(kind="complete", n=n, seed=seed)))
    spec = GeneratorSpec(order, coefficient_seed=seed)
    b = build_generator(lap, spec)
    lam = np.linalg.eigvalsh(lap)
    mapped = np.sort(sum(g * lam**k for k, g in enumerate(spec.gammas(), start=1)))
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh((b + b.T) / 2)), mapped, atol=1e-10)
    assert np.linalg.norm(b - b.T) <= 1e-12 * max(1.0, np.linalg.norm(b))


def test_generator_spec_validation():
    with pytest.raises(ConfigError):
        GeneratorSpec(2, (0.0, 0.0))
    with pytest.raises(ConfigError):
        GeneratorSpec(0)
    with pytest.raises(ConfigError):
        GeneratorSpec(2, (1.0,))
    with pytest.raises(ConfigError):
        GeneratorSpec.from_dict({"order": 2, "bogus": 1})


def test_gammas_deterministic_and_round_trip():
    spec = GeneratorSpec(5, coefficient_seed=42)
    assert spec.gammas() == GeneratorSpec(5, coefficient_seed=42).gammas()
    assert spec.gammas() != GeneratorSpec(5, coefficient_seed=43).gammas()
    assert GeneratorSpec.from_dict(spec.to_dict()) == spec


def test_build_generator_rejects_bad_laplacian():
    with pytest.raises(ValueError):
        build_generator(np.ones((2, 3)), GeneratorSpec(1, (1.0,)))
    with pytest.raises(ValueError):
        build_generator(np.array([[1.0, 0.5], [0.0, 1.0]]), GeneratorSpec(1, (1.0,)))


def test_rank_deficient_generator():
    # eigenvalues of the normalized Laplacian of K_n are 0 and n/(n-1)
    lap = normalized_laplacian(build_graph(GraphTemplate(kind="complete", n=4, w_lo=1, w_hi=1)))
    assert numerical_rank(build_generator(lap, GeneratorSpec(1, (1.0,)))) == 3
    # x^2 - (4/3) x vanishes on the whole spectrum
    b = build_generator(lap, GeneratorSpec(2, (-4.0 / 3.0, 1.0)))
    assert np.abs(b).max() < 1e-14


def test_signals_are_b_times_c():
    b = np.array([[2.0, -1.0], [-1.0, 2.0]])
    c = np.array([[1.0, 0.0, 3.0], [1.0, 1.0, -1.0]])
    np.testing.assert_array_equal(generate_signals(b, c), [[1, -1, 7], [1, 2, -5]])
    with pytest.raises(ValueError):
        generate_signals(b, np.ones((3, 2)))


def test_single_harmonic_is_smooth():
    c = synthesize_coefficients(4, SignalSpec(time_samples=64, harmonics=1, signal_seed=7))
    for row in c:
        r = row - row.mean()
        lag1 = (r[:-1] @ r[1:]) / (r @ r)
        assert lag1 > 0.9


def test_sinusoid_rows_are_periodic_mixtures():
    T = 32
    spec = SignalSpec(time_samples=T, harmonics=3, signal_seed=1)
    c = synthesize_coefficients(3, spec)
    spectrum = np.abs(np.fft.rfft(c, axis=1))
    # energy only at harmonics 1..3
    assert np.all(spectrum[:, 0] < 1e-10)
    assert np.all(spectrum[:, 4:] < 1e-10)


def test_single_time_sample():
    c = synthesize_coefficients(5, SignalSpec(time_samples=1))
    assert c.shape == (5, 1)


def test_coefficients_deterministic():
    spec = SignalSpec(time_samples=16, signal_seed=3)
    assert np.array_equal(synthesize_coefficients(4, spec), synthesize_coefficients(4, spec))
    g = SignalSpec(time_samples=16, mode="iid_gaussian_per_t", signal_seed=3)
    assert np.array_equal(synthesize_coefficients(4, g), synthesize_coefficients(4, g))


def test_signal_spec_validation():
    for kwargs in [dict(time_samples=0), dict(harmonics=0), dict(mode="noise"), dict(signal_seed=-1)]:
        with pytest.raises(ConfigError):
            SignalSpec(**kwargs)


def test_correlation_examples():
    y = np.array([[1.0, 2.0, 3.0, 4.0], [2.0, 4.0, 6.0, 8.5], [-1.0, -2.0, -3.0, -4.0]])
    assert signal_correlation(y, 0, 0) == pytest.approx(1.0)
    assert signal_correlation(y, 0, 2) == pytest.approx(-1.0)
    # Pearson by hand for rows 0 and 1
    a, b = y[0] - y[0].mean(), y[1] - y[1].mean()
    assert signal_correlation(y, 0, 1) == pytest.approx(a @ b / np.linalg.norm(a) / np.linalg.norm(b), abs=1e-15)


def test_independent_rows_weakly_correlated():
    c = synthesize_coefficients(2, SignalSpec(time_samples=1000, mode="iid_gaussian_per_t", signal_seed=5))
    assert abs(signal_correlation(c, 0, 1)) < 0.2


def test_correlation_errors():
    with pytest.raises(ValueError, match="constant"):
        signal_correlation(np.array([[1.0, 1.0, 1.0], [1.0, 2.0, 3.0]]), 0, 1)
    with pytest.raises(ValueError):
        signal_correlation(np.ones((2, 1)), 0, 1)


def test_csv_round_trip_is_exact(tmp_path):
    y = np.random.default_rng(0).standard_normal((3, 5)) * np.array([1e-300, 1.0, 1e300])[:, None]
    text = signals_to_csv(y)
    assert text.splitlines()[0] == "node,t0,t1,t2,t3,t4"
    assert np.array_equal(signals_from_csv(text), y)
    save_signals(y, tmp_path / "s.csv")
    assert np.array_equal(load_signals(tmp_path / "s.csv"), y)


def test_csv_rejects_bad_input():
    with pytest.raises(ValueError):
        signals_from_csv("a,b\n0,1\n")
    with pytest.raises(ValueError):
        signals_from_csv("node,t0\n1,1.0\n")
