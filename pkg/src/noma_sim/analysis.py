"""Reading simulated BER curves against the analytic references."""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .constellation import Constellation, theoretical_ber

__all__ = ["theory_ebn0_for_ber", "horizontal_gap"]


def theory_ebn0_for_ber(c: Constellation | str, ber: float) -> float:
    """Eb/N0 (dB) at which the analytic curve of ``c`` equals ``ber``."""
    if not 0 < ber < 0.5:
        raise ValueError(f"target BER must lie in (0, 0.5), got {ber}")
    f = lambda db: math.log(theoretical_ber(c, db)) - math.log(ber)
    return brentq(f, -20.0, 25.0, xtol=1e-10)


def horizontal_gap(ebn0_db, ber, c: Constellation | str, target: float) -> float:
    """Horizontal distance in dB between a simulated curve and theory at BER ``target``.

    Each simulated point gets its own exact gap ``ebn0 - theory_ebn0_for_ber(ber)``;
    the gap at ``target`` is interpolated linearly in log10(BER) between the two
    points that bracket it. Positive means the simulation needs more Eb/N0.
    Raises ``ValueError`` when no pair of points brackets the target.
    """
    x = np.asarray(ebn0_db, dtype=float)
    y = np.asarray(ber, dtype=float)
    for i in range(len(x) - 1):
        hi, lo = y[i], y[i + 1]
        if hi >= target >= lo and lo > 0:
            g_hi = x[i] - theory_ebn0_for_ber(c, hi)
            g_lo = x[i + 1] - theory_ebn0_for_ber(c, lo)
            if hi == lo:
                return g_hi
            w = (math.log10(hi) - math.log10(target)) / (math.log10(hi) - math.log10(lo))
            return g_hi + w * (g_lo - g_hi)
    raise ValueError(f"no adjacent points bracket BER {target:g}")
