"""Iterative hard-decision interference cancellation between the two user layers.

Each iteration first decides the OFDMA symbols, then cancels them and despreads
what is left to decide the MC-CDMA symbols::

    it 1:   a^1 = slice(r)                       y = r - a^1
    it i:   v = r - spread(b^(i-1)), a^i = slice(v), y = r - a^i
    all:    z = despread(y), b^i = slice(z)

Decisions are constellation points, so the reconstructed interference is the
symbol value itself.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .constellation import Constellation, get_constellation, slice_indices
from .walsh import SpreadingConfig, despread, spread

__all__ = [
    "ReceiverConfig",
    "SicTrace",
    "detect",
    "OverloadMargin",
    "OverloadWarning",
    "overload_margin",
    "format_trace",
]


@dataclass(frozen=True)
class ReceiverConfig:
    spreading: SpreadingConfig
    const_a: Constellation = field(default_factory=lambda: get_constellation("qam16", "lattice"))
    const_b: Constellation = field(default_factory=lambda: get_constellation("qpsk", "lattice"))
    iterations: int = 2

    def __post_init__(self):
        if isinstance(self.iterations, bool) or int(self.iterations) != self.iterations or self.iterations < 1:
            raise ValueError(f"iterations must be an integer >= 1, got {self.iterations!r}")

    @property
    def n(self) -> int:
        return self.spreading.n

    @property
    def m(self) -> int:
        return self.spreading.m


@dataclass
class SicTrace:
    """Per-iteration decisions (leading axis = iteration) and last-iteration intermediates.

    ``a_idx``/``b_idx`` are the decided point indices, i.e. the decided bit labels.
    ``v`` is the input to the final OFDMA slicer (``r`` itself when only one
    iteration ran).
    """

    r: np.ndarray
    a_idx: np.ndarray
    b_idx: np.ndarray
    a_hat: np.ndarray
    b_hat: np.ndarray
    y: np.ndarray
    z: np.ndarray
    v: np.ndarray

    @property
    def iterations(self) -> int:
        return self.a_hat.shape[0]


def detect(r, cfg: ReceiverConfig) -> SicTrace:
    """Run the iterative receiver on ``(..., n)`` DFT-domain samples."""
    r = np.asarray(r, dtype=np.complex128)
    if r.shape[-1:] != (cfg.n,):
        raise ValueError(f"expected {cfg.n} carrier samples, got shape {r.shape}")
    sp = cfg.spreading
    pa, pb = cfg.const_a.points, cfg.const_b.points
    a_idx, b_idx, a_hat, b_hat = [], [], [], []
    v = r
    bh = None
    for i in range(cfg.iterations):
        if bh is not None:
            v = r - spread(bh, sp) if cfg.m else r
        ai = slice_indices(v, cfg.const_a)
        ah = pa[ai]
        y = r - ah
        z = despread(y, sp)
        bi = slice_indices(z, cfg.const_b)
        bh = pb[bi]
        a_idx.append(ai)
        b_idx.append(bi)
        a_hat.append(ah)
        b_hat.append(bh)
    return SicTrace(
        r=r,
        a_idx=np.stack(a_idx),
        b_idx=np.stack(b_idx),
        a_hat=np.stack(a_hat),
        b_hat=np.stack(b_hat),
        y=y,
        z=z,
        v=v,
    )


class OverloadWarning(UserWarning):
    """Spread-user load at or above sqrt(N)."""


@dataclass(frozen=True)
class OverloadMargin:
    m: int
    sqrt_n: float
    interference: float
    half_min_distance: float
    eye_open: bool

    @property
    def margin(self) -> float:
        return self.half_min_distance - self.interference

    def report(self) -> str:
        return "\n".join(
            [
                f"M={self.m}",
                f"sqrt_N={self.sqrt_n:.6g}",
                f"worst_case_interference={self.interference:.6g}",
                f"half_min_distance={self.half_min_distance:.6g}",
                f"margin={self.margin:.6g}",
                f"eye_open={str(self.eye_open).lower()}",
            ]
        )


def overload_margin(cfg: ReceiverConfig) -> OverloadMargin:
    """Worst-case per-axis MC-CDMA leakage onto an OFDMA carrier versus its decision margin.

    The eye is open when ``M * max_axis|b| / sqrt(N)`` stays strictly below half the
    OFDMA minimum distance. Emits :class:`OverloadWarning` when ``M >= sqrt(N)``.
    """
    sqrt_n = math.sqrt(cfg.n)
    interference = cfg.m * cfg.const_b.max_axis_amplitude / sqrt_n
    half = cfg.const_a.min_distance / 2.0
    if cfg.m >= sqrt_n:
        warnings.warn(
            f"{cfg.m} spread users on {cfg.n} carriers is at or above the sqrt(N)={sqrt_n:.4g} load limit",
            OverloadWarning,
            stacklevel=2,
        )
    return OverloadMargin(cfg.m, sqrt_n, interference, half, bool(interference < half))


def _hex_bits(idx: np.ndarray, c: Constellation) -> str:
    bits = c.label_bits[np.asarray(idx).ravel()].ravel()
    return np.packbits(bits).tobytes().hex() if bits.size else "-"


def format_trace(trace: SicTrace, cfg: ReceiverConfig) -> str:
    """One line per iteration with hex-packed decided bits of one frame."""
    if trace.r.ndim != 1:
        raise ValueError("format_trace expects the trace of a single frame")
    lines = [
        f"iter={i + 1} a={_hex_bits(trace.a_idx[i], cfg.const_a)} b={_hex_bits(trace.b_idx[i], cfg.const_b)}"
        for i in range(trace.iterations)
    ]
    return "\n".join(lines) + "\n"
