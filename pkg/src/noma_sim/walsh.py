"""Sylvester Walsh-Hadamard codes: spreading and despreading of the MC-CDMA layer."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

__all__ = ["MAX_ORDER", "hadamard_matrix", "SpreadingConfig", "spread", "despread", "fwht"]

MAX_ORDER = 2**16


def _check_order(n: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"Hadamard order must be an integer, got {n!r}")
    n = int(n)
    if n < 1 or n & (n - 1) or n > MAX_ORDER:
        raise ValueError(f"Hadamard order must be a power of two in [1, {MAX_ORDER}], got {n}")
    return n


@lru_cache(maxsize=16)
def hadamard_matrix(n: int) -> np.ndarray:
    """Read-only ``n x n`` Sylvester matrix (``H_2k = [[H_k, H_k], [H_k, -H_k]]``).

    Row ``m`` is the spreading sequence of code ``m``. Entries are int8 +-1.
    """
    n = _check_order(n)
    h = scipy.linalg.hadamard(n, dtype=np.int8)
    h.setflags(write=False)
    return h


@dataclass(frozen=True)
class SpreadingConfig:
    """``m`` active codes of length ``n``, using Hadamard rows ``row_offset .. row_offset+m-1``.

    ``m = 0`` is allowed and describes a pure OFDMA/TDMA layer.
    """

    n: int
    m: int
    row_offset: int = 0

    def __post_init__(self):
        _check_order(self.n)
        if not 0 <= self.m <= self.n:
            raise ValueError(f"number of spread users m={self.m} must satisfy 0 <= m <= n={self.n}")
        if self.row_offset < 0 or self.row_offset + self.m > self.n:
            raise ValueError(
                f"rows {self.row_offset}..{self.row_offset + self.m - 1} do not fit in a Hadamard matrix of order {self.n}"
            )

    @property
    def codes(self) -> np.ndarray:
        """``(m, n)`` slice of the Hadamard matrix assigned to the active users."""
        return hadamard_matrix(self.n)[self.row_offset : self.row_offset + self.m]

    @property
    def scaled_codes(self) -> np.ndarray:
        """Codes times 1/sqrt(n): orthonormal rows."""
        return _scaled_codes(self.n, self.m, self.row_offset)


@lru_cache(maxsize=64)
def _scaled_codes(n: int, m: int, row_offset: int) -> np.ndarray:
    c = hadamard_matrix(n)[row_offset : row_offset + m] / np.sqrt(n)
    c.setflags(write=False)
    return c


def spread(b, cfg: SpreadingConfig) -> np.ndarray:
    """Per-carrier sum ``(1/sqrt(n)) sum_m w[m, k] b[m]``; works on ``(..., m)`` batches."""
    b = np.asarray(b)
    if b.shape[-1:] != (cfg.m,):
        raise ValueError(f"expected {cfg.m} spread symbols in the last axis, got shape {b.shape}")
    return b @ cfg.scaled_codes


def despread(y, cfg: SpreadingConfig) -> np.ndarray:
    """Correlate ``(..., n)`` carrier samples with each active code (scaled by 1/sqrt(n))."""
    y = np.asarray(y)
    if y.shape[-1:] != (cfg.n,):
        raise ValueError(f"expected {cfg.n} carrier samples in the last axis, got shape {y.shape}")
    return y @ cfg.scaled_codes.T


def fwht(x) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform along the last axis (Sylvester order).

    ``fwht(x) == x @ hadamard_matrix(n)``; useful when all ``n`` codes are despread.
    """
    x = np.array(x, dtype=np.result_type(x, np.float64), copy=True)
    n = _check_order(x.shape[-1])
    lead = x.shape[:-1]
    h = 1
    while h < n:
        x = x.reshape(*lead, n // (2 * h), 2, h)
        top, bot = x[..., 0, :].copy(), x[..., 1, :]
        x[..., 0, :] += bot
        x[..., 1, :] = top - bot
        h *= 2
    return x.reshape(*lead, n)
