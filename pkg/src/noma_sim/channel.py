"""AWGN channel and per-class amplitude gains.

Noise samples come from ``numpy.random.Generator.standard_normal`` (ziggurat
method) scaled to ``n0 / 2`` per real dimension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ChannelConfig", "add_noise", "class_gain_db_to_amplitude"]


@dataclass(frozen=True)
class ChannelConfig:
    """``n0`` is the total complex noise variance per sample."""

    n0: float = 0.0
    gain_a: float = 1.0
    gain_b: float = 1.0

    def __post_init__(self):
        if not self.n0 >= 0:
            raise ValueError(f"noise variance n0 must be >= 0, got {self.n0}")
        for name in ("gain_a", "gain_b"):
            g = getattr(self, name)
            if not (math.isfinite(g) and g > 0):
                raise ValueError(f"{name} must be finite and positive, got {g}")


def add_noise(s, cfg: ChannelConfig | float, rng: np.random.Generator) -> np.ndarray:
    """Add circularly-symmetric complex Gaussian noise of total variance ``n0``."""
    n0 = cfg.n0 if isinstance(cfg, ChannelConfig) else float(cfg)
    if not n0 >= 0:
        raise ValueError(f"noise variance n0 must be >= 0, got {n0}")
    s = np.asarray(s, dtype=np.complex128)
    if n0 == 0:
        return s.copy()
    sigma = math.sqrt(n0 / 2.0)
    noise = rng.standard_normal(s.shape + (2,)).view(np.complex128)[..., 0]
    return s + sigma * noise


def class_gain_db_to_amplitude(db: float) -> float:
    """Attenuation in dB to an amplitude factor, ``10 ** (-db / 20)``."""
    return 10.0 ** (-db / 20.0)
