import numpy as np
import pytest

from noma_sim.analysis import horizontal_gap, theory_ebn0_for_ber
from noma_sim.constellation import theoretical_ber


@pytest.mark.parametrize("name", ["qpsk", "qam16"])
@pytest.mark.parametrize("target", [1e-3, 1e-5])
def test_inverse(name, target):
    assert theoretical_ber(name, theory_ebn0_for_ber(name, target)) == pytest.approx(target, rel=1e-8)


@pytest.mark.parametrize("shift", [0.0, 0.4, 1.5])
def test_gap_of_shifted_theory(shift):
    db = np.arange(0, 16, 0.5)
    ber = theoretical_ber("qpsk", db - shift)
    assert horizontal_gap(db, ber, "qpsk", 1e-4) == pytest.approx(shift, abs=1e-9)


def test_gap_needs_bracket():
    with pytest.raises(ValueError):
        horizontal_gap([1.0, 2.0], [1e-2, 5e-3], "qpsk", 1e-4)
    with pytest.raises(ValueError):
        theory_ebn0_for_ber("qpsk", 0.0)
