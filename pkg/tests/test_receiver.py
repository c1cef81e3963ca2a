import itertools
import warnings

import numpy as np
import pytest

from noma_sim.constellation import get_constellation
from noma_sim.framing import FramingConfig, compose
from noma_sim.receiver import OverloadWarning, ReceiverConfig, detect, format_trace, overload_margin
from noma_sim.walsh import SpreadingConfig, despread, spread

QAM = get_constellation("qam16", "lattice")
QP = get_constellation("qpsk", "lattice")


def rx_config(n, m, iterations=2, amplitude="lattice"):
    return ReceiverConfig(
        SpreadingConfig(n, m),
        get_constellation("qam16", amplitude),
        get_constellation("qpsk", amplitude),
        iterations,
    )


def random_frames(n, m, frames, seed, amplitude="lattice"):
    rng = np.random.default_rng(seed)
    qa, qb = get_constellation("qam16", amplitude), get_constellation("qpsk", amplitude)
    ia = rng.integers(0, 16, (frames, n))
    ib = rng.integers(0, 4, (frames, m))
    return ia, ib, qa.points[ia], qb.points[ib]


@pytest.mark.parametrize("amplitude", ["lattice", "unit"])
def test_zero_noise_single_spread_user_exhaustive_b(amplitude):
    n, cfg = 64, rx_config(64, 1, amplitude=amplitude)
    qb = get_constellation("qpsk", amplitude)
    ia, _, a, _ = random_frames(n, 1, 500, 1, amplitude)
    for ib in range(4):
        b = np.full((500, 1), qb.points[ib])
        r = compose(a, b, FramingConfig(n, 1)).x
        tr = detect(r, cfg)
        np.testing.assert_array_equal(tr.a_idx[0], ia)
        np.testing.assert_array_equal(tr.b_idx[0], ib)


def test_zero_noise_without_spread_signal():
    ia, _, a, _ = random_frames(64, 4, 20, 2)
    tr = detect(a, rx_config(64, 4))
    np.testing.assert_array_equal(tr.a_idx[0], ia)
    np.testing.assert_array_equal(tr.z, np.zeros((20, 4)))
    # all-zero despreader output sits on every QPSK boundary: lowest index wins
    np.testing.assert_array_equal(tr.b_idx, 0)


def test_no_spread_users():
    ia, _, a, _ = random_frames(16, 0, 5, 3)
    tr = detect(a, rx_config(16, 0, iterations=3))
    assert tr.b_idx.shape == (3, 5, 0)
    np.testing.assert_array_equal(tr.a_idx[-1], ia)


def test_intermediates_satisfy_defining_equations():
    n, m = 64, 8
    ia, ib, a, b = random_frames(n, m, 200, 4)
    rng = np.random.default_rng(5)
    r = compose(a, b, FramingConfig(n, m)).x + 0.6 * (rng.standard_normal((200, n)) + 1j * rng.standard_normal((200, n)))
    cfg = rx_config(n, m, iterations=3)
    tr = detect(r, cfg)
    sp = cfg.spreading
    np.testing.assert_allclose(tr.v, r - spread(tr.b_hat[1], sp), atol=1e-12)
    np.testing.assert_allclose(tr.y, r - tr.a_hat[2], atol=1e-12)
    np.testing.assert_allclose(tr.z, despread(tr.y, sp), atol=1e-12)
    np.testing.assert_array_equal(tr.a_hat, QAM.points[tr.a_idx])
    np.testing.assert_array_equal(tr.b_hat, QP.points[tr.b_idx])


def test_single_iteration_v_is_r():
    _, _, a, b = random_frames(16, 2, 3, 6)
    r = compose(a, b, FramingConfig(16, 2)).x
    tr = detect(r, rx_config(16, 2, iterations=1))
    np.testing.assert_array_equal(tr.v, r)
    assert tr.iterations == 1


def test_perfect_cancellation_contract():
    n, m, frames, n0 = 64, 4, 20_000, 0.8
    sp = SpreadingConfig(n, m)
    _, _, a, b = random_frames(n, m, frames, 7)
    rng = np.random.default_rng(8)
    u = np.sqrt(n0 / 2) * (rng.standard_normal((frames, n)) + 1j * rng.standard_normal((frames, n)))
    r = compose(a, b, FramingConfig(n, m)).x + u
    y = r - a  # decisions equal to the transmitted symbols
    np.testing.assert_allclose(y, spread(b, sp) + u, atol=1e-12)
    residual = despread(y, sp) - b
    np.testing.assert_allclose(residual, despread(u, sp), atol=1e-12)
    assert np.mean(np.abs(residual) ** 2) == pytest.approx(n0, rel=0.02)


def _error_count(tr, ia, ib, it):
    return int(np.sum(tr.a_idx[it] != ia) + np.sum(tr.b_idx[it] != ib))


def test_clean_refinement_exhaustive_small_n():
    # N=4, M=1: every a frame (16^4) with every b symbol
    n = 4
    ia = np.array(list(itertools.product(range(16), repeat=n)))
    cfg = rx_config(n, 1)
    assert overload_margin(cfg).eye_open
    for ib in range(4):
        b = np.full((len(ia), 1), QP.points[ib])
        tr = detect(compose(QAM.points[ia], b, FramingConfig(n, 1)).x, cfg)
        e1 = _error_count(tr, ia, ib, 0)
        e2 = _error_count(tr, ia, ib, 1)
        assert e2 <= e1 and e2 == 0


@pytest.mark.parametrize("m", [1, 4, 7])
def test_clean_refinement_random_n64(m):
    cfg = rx_config(64, m)
    assert overload_margin(cfg).eye_open
    ia, ib, a, b = random_frames(64, m, 2000, 10 + m)
    tr = detect(compose(a, b, FramingConfig(64, m)).x, cfg)
    assert _error_count(tr, ia, ib, 1) <= _error_count(tr, ia, ib, 0)
    assert _error_count(tr, ia, ib, 1) == 0


def test_deterministic():
    _, _, a, b = random_frames(32, 3, 10, 12)
    r = compose(a, b, FramingConfig(32, 3)).x + 0.3
    t1, t2 = detect(r, rx_config(32, 3)), detect(r, rx_config(32, 3))
    np.testing.assert_array_equal(t1.a_idx, t2.a_idx)
    np.testing.assert_array_equal(t1.b_idx, t2.b_idx)
    np.testing.assert_array_equal(t1.z, t2.z)


def test_input_validation():
    with pytest.raises(ValueError):
        detect(np.zeros(10), rx_config(16, 2))
    with pytest.raises(ValueError):
        rx_config(16, 2, iterations=0)


def test_margin_lattice_examples():
    with pytest.warns(OverloadWarning):
        d8 = overload_margin(rx_config(64, 8))
    assert d8.interference == pytest.approx(1.0) and d8.half_min_distance == pytest.approx(1.0)
    assert not d8.eye_open
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        d1 = overload_margin(rx_config(64, 1))
    assert d1.interference == pytest.approx(0.125) and d1.eye_open


def test_margin_unit_energy_examples():
    with pytest.warns(OverloadWarning):
        d8 = overload_margin(rx_config(64, 8, amplitude="unit"))
    assert d8.interference == pytest.approx(8 * (1 / np.sqrt(2)) / 8)
    assert d8.half_min_distance == pytest.approx(1 / np.sqrt(10))
    assert not d8.eye_open
    d1 = overload_margin(rx_config(64, 1, amplitude="unit"))
    assert d1.interference == pytest.approx(0.0884, abs=1e-4) and d1.eye_open


def test_margin_without_spread_users():
    d = overload_margin(rx_config(64, 0))
    assert d.interference == 0 and d.eye_open
    assert "eye_open=true" in d.report()


def test_trace_dump_format():
    cfg = rx_config(4, 1, iterations=2)
    a = QAM.points[[0, 15, 5, 10]]
    tr = detect(compose(a, QP.points[[3]], FramingConfig(4, 1)).x, cfg)
    lines = format_trace(tr, cfg).splitlines()
    assert lines == ["iter=1 a=0f5a b=c0", "iter=2 a=0f5a b=c0"]
    with pytest.raises(ValueError):
        format_trace(detect(np.zeros((2, 4)), cfg), cfg)
