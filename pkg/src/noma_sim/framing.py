"""Superposition of the two user layers and the OFDM time-domain conversion."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .walsh import SpreadingConfig, spread

__all__ = [
    "MODES",
    "FramingConfig",
    "NomaFrame",
    "compose",
    "to_time",
    "from_time",
    "write_frame_dump",
    "read_frame_dump",
]

MODES = ("ofdma", "tdma")


@dataclass(frozen=True)
class FramingConfig:
    """Frame geometry.

    ``cp_len=None`` resolves to ``n // 8`` in OFDMA mode and 0 in TDMA mode,
    where the composite vector is transmitted sample by sample without a DFT.
    """

    n: int
    m: int
    cp_len: int | None = None
    mode: str = "ofdma"
    row_offset: int = 0

    def __post_init__(self):
        mode = self.mode.lower()
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        object.__setattr__(self, "mode", mode)
        cp = self.cp_len
        if cp is None:
            cp = self.n // 8 if mode == "ofdma" else 0
        if not 0 <= cp <= self.n:
            raise ValueError(f"cp_len={cp} must be in [0, n={self.n}]")
        if mode == "tdma" and cp:
            raise ValueError("TDMA mode has no cyclic prefix (cp_len must be 0)")
        object.__setattr__(self, "cp_len", int(cp))
        self.spreading  # validates n, m, row_offset

    @property
    def spreading(self) -> SpreadingConfig:
        return SpreadingConfig(self.n, self.m, self.row_offset)

    @property
    def samples_per_frame(self) -> int:
        return self.n + self.cp_len


@dataclass(frozen=True)
class NomaFrame:
    a: np.ndarray
    b: np.ndarray
    x: np.ndarray


def compose(a, b, cfg: FramingConfig, gain_a: float = 1.0, gain_b: float = 1.0) -> NomaFrame:
    """``x = gain_a * a + gain_b * spread(b)`` carrier by carrier.

    Accepts batches: ``a`` is ``(..., n)`` and ``b`` is ``(..., m)``.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape[-1:] != (cfg.n,):
        raise ValueError(f"expected {cfg.n} OFDMA symbols, got shape {a.shape}")
    if b.shape[-1:] != (cfg.m,):
        raise ValueError(f"expected {cfg.m} MC-CDMA symbols, got shape {b.shape}")
    x = gain_a * a
    if cfg.m:
        x = x + gain_b * spread(b, cfg.spreading)
    return NomaFrame(a, b, x)


def to_time(x, cfg: FramingConfig) -> np.ndarray:
    """Unitary IDFT of each ``n``-carrier block followed by the cyclic prefix.

    TDMA mode returns ``x`` unchanged.
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[-1:] != (cfg.n,):
        raise ValueError(f"expected {cfg.n} carrier values, got shape {x.shape}")
    if cfg.mode == "tdma":
        return x
    body = np.fft.ifft(x, norm="ortho")
    if cfg.cp_len == 0:
        return body
    return np.concatenate([body[..., cfg.n - cfg.cp_len :], body], axis=-1)


def from_time(s, cfg: FramingConfig) -> np.ndarray:
    """Drop the cyclic prefix and apply the unitary DFT (identity in TDMA mode)."""
    s = np.asarray(s, dtype=np.complex128)
    if s.shape[-1:] != (cfg.samples_per_frame,):
        raise ValueError(f"expected {cfg.samples_per_frame} time samples, got shape {s.shape}")
    if cfg.mode == "tdma":
        return s
    return np.fft.fft(s[..., cfg.cp_len :], norm="ortho")


def write_frame_dump(path, samples, cfg: FramingConfig) -> tuple[Path, Path]:
    """Write ``<path>.iq`` (little-endian interleaved complex64) and ``<path>.txt`` header."""
    path = Path(path)
    iq = path.with_name(path.name + ".iq")
    hdr = path.with_name(path.name + ".txt")
    np.asarray(samples, dtype="<c8").ravel().tofile(iq)
    hdr.write_text(f"N={cfg.n}\nM={cfg.m}\ncp_len={cfg.cp_len}\nmode={cfg.mode}\n")
    return iq, hdr


def read_frame_dump(path) -> tuple[np.ndarray, FramingConfig]:
    """Inverse of :func:`write_frame_dump`; samples come back as ``(frames, n + cp_len)``."""
    path = Path(path)
    fields = {}
    for line in path.with_name(path.name + ".txt").read_text().splitlines():
        if line.strip():
            k, v = line.split("=", 1)
            fields[k.strip()] = v.strip()
    cfg = FramingConfig(int(fields["N"]), int(fields["M"]), int(fields["cp_len"]), fields["mode"])
    data = np.fromfile(path.with_name(path.name + ".iq"), dtype="<c8").astype(np.complex128)
    return data.reshape(-1, cfg.samples_per_frame), cfg
