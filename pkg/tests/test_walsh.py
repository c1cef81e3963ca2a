import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noma_sim.walsh import SpreadingConfig, despread, fwht, hadamard_matrix, spread


def sylvester(n):
    h = np.array([[1]], dtype=np.int64)
    while h.shape[0] < n:
        h = np.block([[h, h], [h, -h]])
    return h


def test_base_cases():
    assert hadamard_matrix(1).tolist() == [[1]]
    assert hadamard_matrix(2).tolist() == [[1, 1], [1, -1]]


@pytest.mark.parametrize("n", [2**k for k in range(11)])
def test_sylvester_recursion_and_integer_orthogonality(n):
    h = hadamard_matrix(n).astype(np.int64)
    np.testing.assert_array_equal(h, sylvester(n))
    np.testing.assert_array_equal(h @ h.T, n * np.eye(n, dtype=np.int64))


@pytest.mark.parametrize("n", [0, 3, 6, 100, 2**17])
def test_rejects_bad_orders(n):
    with pytest.raises(ValueError, match="power of two"):
        hadamard_matrix(n)


def test_matrix_is_read_only():
    with pytest.raises(ValueError):
        hadamard_matrix(4)[0, 0] = 5


def test_config_validation():
    with pytest.raises(ValueError):
        SpreadingConfig(64, 65)
    with pytest.raises(ValueError):
        SpreadingConfig(64, 8, row_offset=60)
    with pytest.raises(ValueError):
        SpreadingConfig(48, 4)


def test_spread_all_ones_row():
    np.testing.assert_allclose(spread([1.0], SpreadingConfig(4, 1)), [0.5, 0.5, 0.5, 0.5])


def test_row_offset_selects_rows():
    cfg = SpreadingConfig(8, 2, row_offset=3)
    np.testing.assert_array_equal(cfg.codes, hadamard_matrix(8)[3:5])


def test_dimension_checks():
    cfg = SpreadingConfig(8, 2)
    with pytest.raises(ValueError):
        spread(np.ones(3), cfg)
    with pytest.raises(ValueError):
        despread(np.ones(4), cfg)


def complex_vectors(size):
    comp = st.floats(-10, 10, allow_nan=False)
    return st.lists(st.tuples(comp, comp), min_size=size, max_size=size).map(
        lambda xs: np.array([complex(a, b) for a, b in xs])
    )


@st.composite
def configs_and_symbols(draw):
    n = 2 ** draw(st.integers(1, 10))
    m = draw(st.integers(1, min(n, 64)))
    off = draw(st.integers(0, n - m))
    b = draw(complex_vectors(m))
    return SpreadingConfig(n, m, off), b


@settings(max_examples=60, deadline=None)
@given(configs_and_symbols())
def test_round_trip_and_energy(cb):
    cfg, b = cb
    x = spread(b, cfg)
    np.testing.assert_allclose(despread(x, cfg), b, atol=1e-12 * max(1.0, np.abs(b).max()))
    assert np.sum(np.abs(x) ** 2) == pytest.approx(np.sum(np.abs(b) ** 2), rel=1e-12, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(configs_and_symbols(), st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(cb, alpha, beta):
    cfg, b = cb
    c = np.roll(b, 1) * 1j
    lhs = spread(alpha * b + beta * c, cfg)
    rhs = alpha * spread(b, cfg) + beta * spread(c, cfg)
    np.testing.assert_allclose(lhs, rhs, atol=1e-11)


def test_full_load_round_trip_n1024():
    cfg = SpreadingConfig(1024, 1024)
    rng = np.random.default_rng(0)
    b = rng.standard_normal(1024) + 1j * rng.standard_normal(1024)
    assert np.abs(despread(spread(b, cfg), cfg) - b).max() < 1e-12


def test_peak_interference_bound_n64_m8():
    cfg = SpreadingConfig(64, 8)
    rng = np.random.default_rng(1)
    b = ((1 - 2 * rng.integers(0, 2, (5000, 8))) + 1j * (1 - 2 * rng.integers(0, 2, (5000, 8)))) / np.sqrt(2)
    assert np.abs(spread(b, cfg)).max() <= 8 / np.sqrt(64) + 1e-12


def test_despread_zero():
    np.testing.assert_array_equal(despread(np.zeros(16), SpreadingConfig(16, 4)), np.zeros(4))


def test_despread_preserves_noise_variance():
    cfg = SpreadingConfig(64, 8)
    rng = np.random.default_rng(2)
    sigma2 = 0.37
    noise = np.sqrt(sigma2 / 2) * (rng.standard_normal((100_000, 64)) + 1j * rng.standard_normal((100_000, 64)))
    z = despread(noise, cfg)
    var = np.mean(np.abs(z) ** 2, axis=0)
    assert np.all(np.abs(var / sigma2 - 1) < 0.05)


@pytest.mark.parametrize("n", [1, 2, 8, 256])
def test_fwht_matches_matrix(n):
    rng = np.random.default_rng(n)
    x = rng.standard_normal((3, n)) + 1j * rng.standard_normal((3, n))
    np.testing.assert_allclose(fwht(x), x @ hadamard_matrix(n), atol=1e-12 * n)
