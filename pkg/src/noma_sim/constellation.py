"""Gray-labelled QPSK / 16-QAM alphabets, hard slicing and reference BER curves.

Point ``i`` of every built-in constellation carries the label ``format(i, "0kb")``,
so a symbol index *is* its bit label read MSB first.

Labelings
---------
QPSK (quadrant Gray), first bit selects the sign of I, second bit the sign of Q::

    00 -> (+1+1j)/sqrt(2)   01 -> (+1-1j)/sqrt(2)
    10 -> (-1+1j)/sqrt(2)   11 -> (-1-1j)/sqrt(2)

16-QAM: bits ``b0 b1`` pick the I level and ``b2 b3`` the Q level, each with the
2-bit Gray map ``00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3`` (scaled by 1/sqrt(10)).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import erfc

__all__ = [
    "Constellation",
    "QPSK",
    "QAM16",
    "AMPLITUDE_CONVENTIONS",
    "get_constellation",
    "map_bits",
    "hard_slice",
    "slice_indices",
    "indices_to_bits",
    "bit_errors",
    "qfunc",
    "theoretical_ber",
]

AMPLITUDE_CONVENTIONS = ("lattice", "unit")


@dataclass(frozen=True, eq=False)
class Constellation:
    """Finite labelled alphabet.

    ``axis_levels`` is set for separable (I x Q product) alphabets whose index is
    ``i_code * len(q_levels) + q_code``; it enables the per-axis fast slicer.
    """

    name: str
    points: np.ndarray
    axis_levels: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128)
        k = int(round(np.log2(len(pts))))
        if len(pts) < 2 or 2**k != len(pts):
            raise ValueError(f"constellation size must be a power of two >= 2, got {len(pts)}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("constellation points must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def bits_per_symbol(self) -> int:
        return int(round(np.log2(self.size)))

    @cached_property
    def labels(self) -> tuple[str, ...]:
        k = self.bits_per_symbol
        return tuple(format(i, f"0{k}b") for i in range(self.size))

    @cached_property
    def label_bits(self) -> np.ndarray:
        """``(size, k)`` uint8 table; row ``i`` is the label of point ``i``."""
        k = self.bits_per_symbol
        shifts = np.arange(k - 1, -1, -1)
        table = ((np.arange(self.size)[:, None] >> shifts) & 1).astype(np.uint8)
        table.setflags(write=False)
        return table

    @property
    def energy(self) -> float:
        """Mean of |point|^2 (uniform priors)."""
        return float(np.mean(np.abs(self.points) ** 2))

    @cached_property
    def min_distance(self) -> float:
        d = np.abs(self.points[:, None] - self.points[None, :])
        return float(d[~np.eye(self.size, dtype=bool)].min())

    @property
    def max_axis_amplitude(self) -> float:
        """Largest |Re| or |Im| over the points."""
        return float(max(np.abs(self.points.real).max(), np.abs(self.points.imag).max()))

    def scaled(self, factor: float) -> Constellation:
        levels = None
        if self.axis_levels is not None:
            levels = (self.axis_levels[0] * factor, self.axis_levels[1] * factor)
        return Constellation(self.name, self.points * factor, levels)

    def with_amplitude(self, convention: str) -> Constellation:
        """Rescale to an amplitude convention.

        ``"unit"`` gives unit mean energy. ``"lattice"`` places the points on the
        odd-integer grid (minimum distance 2, e.g. 16-QAM levels +-1, +-3 and
        QPSK +-1+-1j), so one spread user contributes +-1/sqrt(N) per axis
        against a unit decision half-distance.
        """
        if convention == "unit":
            return self.scaled(1.0 / np.sqrt(self.energy))
        if convention == "lattice":
            return self.scaled(2.0 / self.min_distance)
        raise ValueError(f"amplitude convention must be one of {AMPLITUDE_CONVENTIONS}, got {convention!r}")

    def __eq__(self, other):
        if not isinstance(other, Constellation):
            return NotImplemented
        return self.name == other.name and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash((self.name, self.points.tobytes()))

    def __repr__(self):
        return f"Constellation({self.name!r}, size={self.size}, energy={self.energy:.6g})"


def _product_constellation(name: str, i_levels, q_levels) -> Constellation:
    i_levels = np.asarray(i_levels, dtype=float)
    q_levels = np.asarray(q_levels, dtype=float)
    pts = (i_levels[:, None] + 1j * q_levels[None, :]).ravel()
    return Constellation(name, pts, (i_levels, q_levels))


# Level order is Gray-code order: entry g is the level labelled g.
_GRAY_PAM4 = np.array([-3.0, -1.0, 3.0, 1.0])

QPSK = _product_constellation("qpsk", [1.0, -1.0], [1.0, -1.0]).scaled(1 / np.sqrt(2))
QAM16 = _product_constellation("qam16", _GRAY_PAM4, _GRAY_PAM4).scaled(1 / np.sqrt(10))

_BUILTIN = {"qpsk": QPSK, "qam16": QAM16}


def get_constellation(name: str, amplitude: str = "unit") -> Constellation:
    """Look up a built-in alphabet by name (``qpsk`` or ``qam16``)."""
    try:
        c = _BUILTIN[name.lower()]
    except KeyError:
        raise ValueError(f"unknown constellation {name!r}; choose from {sorted(_BUILTIN)}") from None
    return c if amplitude == "unit" else c.with_amplitude(amplitude)


def map_bits(bits, c: Constellation) -> np.ndarray:
    """Map a flat bit sequence to symbols, ``bits_per_symbol`` bits (MSB first) each."""
    bits = np.asarray(bits).ravel()
    k = c.bits_per_symbol
    if bits.size % k:
        raise ValueError(
            f"bit count {bits.size} is not a multiple of {k} bits/symbol ({bits.size % k} left over)"
        )
    if bits.size and not np.isin(bits, (0, 1)).all():
        raise ValueError("bits must be 0 or 1")
    idx = bits.reshape(-1, k).astype(np.int64) @ (1 << np.arange(k - 1, -1, -1))
    return c.points[idx]


def _slice_generic(samples: np.ndarray, points: np.ndarray) -> np.ndarray:
    d = np.abs(samples[..., None] - points) ** 2
    return np.argmin(d, axis=-1)  # argmin keeps the lowest index on ties


def _slice_axis(u: np.ndarray, levels: np.ndarray) -> np.ndarray:
    return np.argmin(np.abs(u[..., None] - levels), axis=-1)


def slice_indices(samples, c: Constellation) -> np.ndarray:
    """Vectorized minimum-distance decisions, returned as point indices.

    Ties go to the lowest point index. For product alphabets the per-axis
    search gives the same answer as the exhaustive search, ties included,
    because the index is ``i_code * |Q| + q_code``.
    """
    samples = np.asarray(samples, dtype=np.complex128)
    if not np.all(np.isfinite(samples)):
        raise ValueError("cannot slice non-finite samples")
    if c.axis_levels is None:
        return _slice_generic(samples, c.points)
    i_lv, q_lv = c.axis_levels
    return _slice_axis(samples.real, i_lv) * len(q_lv) + _slice_axis(samples.imag, q_lv)


def hard_slice(sample: complex, c: Constellation) -> tuple[complex, str]:
    """Threshold detector for one sample: nearest point and its label."""
    sample = complex(sample)
    if not (np.isfinite(sample.real) and np.isfinite(sample.imag)):
        raise ValueError(f"cannot slice non-finite sample {sample!r}")
    i = int(slice_indices(np.asarray(sample), c))
    return complex(c.points[i]), c.labels[i]


def indices_to_bits(idx, c: Constellation) -> np.ndarray:
    """Expand symbol indices to their label bits, shape ``idx.shape + (k,)``."""
    return c.label_bits[np.asarray(idx)]


_POPCOUNT8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


def bit_errors(tx_idx, rx_idx) -> int:
    """Total Hamming distance between the labels of two index arrays."""
    diff = np.bitwise_xor(np.asarray(tx_idx), np.asarray(rx_idx))
    return int(_POPCOUNT8[diff & 0xFF].sum())


def qfunc(x):
    """Gaussian tail probability Q(x)."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))


def theoretical_ber(c: Constellation | str, ebn0_db, exact: bool = True):
    """Uncoded Gray-mapped bit error probability over AWGN.

    QPSK: ``Q(sqrt(2 g))``. 16-QAM with per-axis Gray labels, ``x = sqrt(4 g / 5)``::

        exact=True :  (3 Q(x) + 2 Q(3x) - Q(5x)) / 4
        exact=False:  3/4 Q(x)            (nearest-neighbour approximation)

    where ``g`` is Eb/N0 in linear units. Scaling of ``c`` is irrelevant.
    """
    name = c if isinstance(c, str) else c.name
    g = 10.0 ** (np.asarray(ebn0_db, dtype=float) / 10.0)
    if name == "qpsk":
        out = qfunc(np.sqrt(2.0 * g))
    elif name == "qam16":
        x = np.sqrt(0.8 * g)
        out = 0.75 * qfunc(x)
        if exact:
            out = (3.0 * qfunc(x) + 2.0 * qfunc(3.0 * x) - qfunc(5.0 * x)) / 4.0
    else:
        raise ValueError(f"no analytic BER for constellation {name!r}")
    return float(out) if np.ndim(out) == 0 else out
