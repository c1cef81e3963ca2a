"""Two-user uplink capacity: superposition with SIC versus orthogonal sharing.

User 1 holds power share ``alpha`` and is received unattenuated; user 2 holds
``1 - alpha`` and is attenuated by ``atten2_db`` (power factor ``g``). All rates
are in bit/s/Hz over a unit bandwidth.

* NOMA (user 1 decoded first, then removed)::

      R1 = log2(1 + alpha P / ((1 - alpha) g P + N0))
      R2 = log2(1 + (1 - alpha) g P / N0)

* Orthogonal access with bandwidth shares equal to the power shares::

      R1 = alpha log2(1 + P / N0)
      R2 = (1 - alpha) log2(1 + g P / N0)
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PowerSplit",
    "CapacityResult",
    "CapacityRow",
    "power_factor_to_db",
    "noma_capacity",
    "owma_capacity",
    "capacity_sweep",
]


def power_factor_to_db(factor: float) -> float:
    """Attenuation in dB for a power division ``factor`` (4 -> 6.0206 dB)."""
    if not factor >= 1:
        raise ValueError(f"power factor must be >= 1, got {factor}")
    return 10.0 * math.log10(factor)


@dataclass(frozen=True)
class PowerSplit:
    alpha: float
    p_over_n0: float
    atten2_db: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not (self.p_over_n0 >= 0 and math.isfinite(self.p_over_n0)):
            raise ValueError(f"p_over_n0 must be finite and >= 0, got {self.p_over_n0}")
        if not (self.atten2_db >= 0 and math.isfinite(self.atten2_db)):
            raise ValueError(f"atten2_db must be finite and >= 0, got {self.atten2_db}")

    @property
    def power_factor(self) -> float:
        """Received power fraction of user 2, ``10 ** (-atten2_db / 10)``."""
        return 10.0 ** (-self.atten2_db / 10.0)


@dataclass(frozen=True)
class CapacityResult:
    r1: float
    r2: float

    @property
    def r_total(self) -> float:
        return self.r1 + self.r2


def noma_capacity(ps: PowerSplit) -> CapacityResult:
    p1 = ps.alpha * ps.p_over_n0
    p2 = (1.0 - ps.alpha) * ps.power_factor * ps.p_over_n0
    return CapacityResult(math.log2(1.0 + p1 / (p2 + 1.0)), math.log2(1.0 + p2))


def owma_capacity(ps: PowerSplit) -> CapacityResult:
    r1 = ps.alpha * math.log2(1.0 + ps.p_over_n0)
    r2 = (1.0 - ps.alpha) * math.log2(1.0 + ps.power_factor * ps.p_over_n0)
    return CapacityResult(r1, r2)


@dataclass(frozen=True)
class CapacityRow:
    split: PowerSplit
    noma: CapacityResult
    owma: CapacityResult

    @property
    def gain_pct(self) -> float:
        rn, ro = self.noma.r_total, self.owma.r_total
        # Equal-capacity cases (no attenuation, alpha in {0, 1}) differ only by rounding.
        if math.isclose(rn, ro, rel_tol=1e-12, abs_tol=1e-15):
            return 0.0
        return 100.0 * (rn - ro) / ro


def capacity_sweep(alphas, p_over_n0s, atten2_dbs) -> list[CapacityRow]:
    """Evaluate both schemes on the Cartesian grid (attenuation outermost, alpha innermost)."""
    grids = [np.atleast_1d(np.asarray(g, dtype=float)) for g in (atten2_dbs, p_over_n0s, alphas)]
    if any(g.size == 0 for g in grids):
        raise ValueError("capacity sweep needs at least one value on every axis")
    rows = []
    for atten, snr, alpha in itertools.product(*grids):
        ps = PowerSplit(float(alpha), float(snr), float(atten))
        rows.append(CapacityRow(ps, noma_capacity(ps), owma_capacity(ps)))
    return rows
