"""Monte Carlo BER engine for the superposed OFDMA / MC-CDMA link.

Randomness is organised in blocks of ``block_frames`` frames. Block ``j`` of
sweep point ``p`` draws from ``SeedSequence([master_seed, p, j])``, and the
stopping rule is evaluated on the block sequence in order, so a result depends
only on the configuration and the seed, never on how many workers ran it.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import add_noise, class_gain_db_to_amplitude
from .constellation import (
    Constellation,
    bit_errors,
    get_constellation,
    map_bits,
    theoretical_ber,
)
from .framing import FramingConfig, compose, from_time, to_time
from .receiver import ReceiverConfig, detect

__all__ = ["SimConfig", "BerRecord", "build_sim_config", "noise_variance", "run_point", "run_sweep"]


@dataclass(frozen=True)
class SimConfig:
    framing: FramingConfig
    receiver: ReceiverConfig
    sweep: tuple[float, ...]
    ref_class: str = "a"
    master_seed: int = 0
    min_errors: int = 200
    max_bits: int = 10**8
    gain_a: float = 1.0
    gain_b: float = 1.0
    block_frames: int = 1024
    amplitude: str = "lattice"

    def __post_init__(self):
        object.__setattr__(self, "sweep", tuple(float(s) for s in self.sweep))
        object.__setattr__(self, "ref_class", self.ref_class.lower())
        if not self.sweep:
            raise ValueError("sweep must contain at least one Eb/N0 value")
        if any(b <= a for a, b in zip(self.sweep, self.sweep[1:])):
            raise ValueError(f"sweep must be strictly increasing, got {self.sweep}")
        if any(math.isnan(s) or s == -math.inf for s in self.sweep):
            raise ValueError("sweep values must be finite or +inf")
        if self.ref_class not in ("a", "b"):
            raise ValueError(f"ref_class must be 'a' or 'b', got {self.ref_class!r}")
        if self.ref_class == "b" and self.framing.m == 0:
            raise ValueError("ref_class 'b' needs at least one MC-CDMA user")
        if self.framing.spreading != self.receiver.spreading:
            raise ValueError("framing and receiver disagree on N, M or row_offset")
        if self.min_errors < 1:
            raise ValueError(f"min_errors must be >= 1, got {self.min_errors}")
        if self.max_bits < 1 or self.block_frames < 1:
            raise ValueError("max_bits and block_frames must be positive")
        for g in (self.gain_a, self.gain_b):
            if not (math.isfinite(g) and g > 0):
                raise ValueError(f"class gains must be finite and positive, got {g}")

    @property
    def rx_const_a(self) -> Constellation:
        return self.receiver.const_a.scaled(self.gain_a)

    @property
    def rx_const_b(self) -> Constellation:
        return self.receiver.const_b.scaled(self.gain_b)

    def to_dict(self) -> dict:
        """Plain description sufficient for :func:`SimConfig.from_dict`."""
        rc = self.receiver
        return {
            "n": self.framing.n,
            "m": self.framing.m,
            "mod_a": rc.const_a.name,
            "mod_b": rc.const_b.name,
            "amplitude": self.amplitude,
            "iterations": rc.iterations,
            "cp_len": self.framing.cp_len,
            "mode": self.framing.mode,
            "row_offset": self.framing.row_offset,
            "sweep": [s if math.isfinite(s) else "inf" for s in self.sweep],
            "ref_class": self.ref_class,
            "master_seed": self.master_seed,
            "min_errors": self.min_errors,
            "max_bits": self.max_bits,
            "gain_a": self.gain_a,
            "gain_b": self.gain_b,
            "block_frames": self.block_frames,
        }

    @classmethod
    def from_dict(cls, d: dict) -> SimConfig:
        d = dict(d)
        d["sweep"] = [float(s) for s in d["sweep"]]
        gain_a, gain_b = d.pop("gain_a", 1.0), d.pop("gain_b", 1.0)
        cfg = build_sim_config(**d)
        return cfg if (gain_a, gain_b) == (1.0, 1.0) else _replace(cfg, gain_a=gain_a, gain_b=gain_b)


def _replace(cfg: SimConfig, **kw) -> SimConfig:
    from dataclasses import replace

    return replace(cfg, **kw)


def build_sim_config(
    n: int = 64,
    m: int = 4,
    mod_a: str = "qam16",
    mod_b: str = "qpsk",
    iterations: int = 2,
    sweep=(10.0,),
    *,
    amplitude: str = "lattice",
    cp_len: int | None = None,
    mode: str = "ofdma",
    row_offset: int = 0,
    ref_class: str = "a",
    master_seed: int = 0,
    min_errors: int = 200,
    max_bits: int = 10**8,
    gain_a_db: float = 0.0,
    gain_b_db: float = 0.0,
    block_frames: int = 1024,
) -> SimConfig:
    """Assemble a :class:`SimConfig` from names and numbers.

    ``gain_*_db`` are attenuations of each class in dB.
    """
    framing = FramingConfig(n, m, cp_len, mode, row_offset)
    receiver = ReceiverConfig(
        framing.spreading,
        get_constellation(mod_a, amplitude),
        get_constellation(mod_b, amplitude),
        iterations,
    )
    return SimConfig(
        framing,
        receiver,
        tuple(sweep),
        ref_class,
        master_seed,
        min_errors,
        int(max_bits),
        class_gain_db_to_amplitude(gain_a_db),
        class_gain_db_to_amplitude(gain_b_db),
        block_frames,
        amplitude,
    )


@dataclass
class BerRecord:
    """Bit counts for one noise level; ``errors_*[i]`` belongs to iteration ``i + 1``.

    Both Eb/N0 axes describe the same noise variance ``n0``. Class-B fields are
    ``nan`` / empty when no MC-CDMA user is configured.
    """

    ebn0_db_a: float
    ebn0_db_b: float
    n0: float
    frames: int
    bits_a: int
    bits_b: int
    errors_a: tuple[int, ...]
    errors_b: tuple[int, ...]
    theory_a: float
    theory_b: float
    capped: bool
    runtime_s: float = field(default=0.0, compare=False)

    @property
    def ber_a(self) -> np.ndarray:
        return np.asarray(self.errors_a, dtype=float) / self.bits_a

    @property
    def ber_b(self) -> np.ndarray:
        if not self.bits_b:
            return np.zeros(0)
        return np.asarray(self.errors_b, dtype=float) / self.bits_b

    def to_dict(self) -> dict:
        return asdict(self)


def _ebn0_to_db(es: float, k: int, n0: float) -> float:
    if n0 == 0:
        return math.inf
    return 10.0 * math.log10(es / k / n0)


def noise_variance(cfg: SimConfig, ebn0_db: float) -> float:
    """Complex noise variance giving ``ebn0_db`` on the reference class axis.

    Eb of a class is its received mean symbol energy over its bits per symbol;
    the cyclic prefix is not charged to Eb.
    """
    if ebn0_db == math.inf:
        return 0.0
    c = cfg.rx_const_a if cfg.ref_class == "a" else cfg.rx_const_b
    return c.energy / (c.bits_per_symbol * 10.0 ** (ebn0_db / 10.0))


def _simulate_block(cfg: SimConfig, n0: float, seed: tuple[int, int, int]) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(np.random.SeedSequence(list(seed)))
    fr, rc = cfg.framing, cfg.receiver
    n, m, f = fr.n, fr.m, cfg.block_frames
    ka, kb = rc.const_a.bits_per_symbol, rc.const_b.bits_per_symbol
    bits_a = rng.integers(0, 2, size=(f, n * ka), dtype=np.uint8)
    bits_b = rng.integers(0, 2, size=(f, m * kb), dtype=np.uint8)
    weights_a = 1 << np.arange(ka - 1, -1, -1)
    weights_b = 1 << np.arange(kb - 1, -1, -1)
    idx_a = bits_a.reshape(f, n, ka) @ weights_a
    idx_b = bits_b.reshape(f, m, kb) @ weights_b
    a = map_bits(bits_a, rc.const_a).reshape(f, n)
    b = map_bits(bits_b, rc.const_b).reshape(f, m)
    frame = compose(a, b, fr, cfg.gain_a, cfg.gain_b)
    received = add_noise(to_time(frame.x, fr), n0, rng)
    rx_cfg = ReceiverConfig(rc.spreading, cfg.rx_const_a, cfg.rx_const_b, rc.iterations)
    trace = detect(from_time(received, fr), rx_cfg)
    err_a = np.array([bit_errors(idx_a, trace.a_idx[i]) for i in range(rc.iterations)], dtype=np.int64)
    err_b = np.array([bit_errors(idx_b, trace.b_idx[i]) for i in range(rc.iterations)], dtype=np.int64)
    return err_a, err_b


def _blocks(cfg: SimConfig, n0: float, point_index: int, pool):
    """Yield block results in block order, computing ``pool`` workers' worth at a time."""
    j = 0
    if pool is None:
        while True:
            yield _simulate_block(cfg, n0, (cfg.master_seed, point_index, j))
            j += 1
    width = pool._max_workers
    while True:
        seeds = [(cfg.master_seed, point_index, j + k) for k in range(width)]
        yield from pool.map(_simulate_block, [cfg] * width, [n0] * width, seeds)
        j += width


def _run_point(cfg: SimConfig, ebn0_db: float, point_index: int, pool) -> BerRecord:
    t0 = time.perf_counter()
    rc = cfg.receiver
    n0 = noise_variance(cfg, ebn0_db)
    ca, cb = cfg.rx_const_a, cfg.rx_const_b
    payload_a = cfg.framing.n * ca.bits_per_symbol
    payload_b = cfg.framing.m * cb.bits_per_symbol
    err_a = np.zeros(rc.iterations, dtype=np.int64)
    err_b = np.zeros(rc.iterations, dtype=np.int64)
    frames = 0
    capped = False
    for ea, eb in _blocks(cfg, n0, point_index, pool):
        err_a += ea
        err_b += eb
        frames += cfg.block_frames
        done_a = frames * payload_a >= cfg.max_bits
        done_b = payload_b == 0 or frames * payload_b >= cfg.max_bits
        ok_a = done_a or err_a.min() >= cfg.min_errors
        ok_b = done_b or err_b.min() >= cfg.min_errors
        if ok_a and ok_b:
            capped = bool(err_a.min() < cfg.min_errors or (payload_b and err_b.min() < cfg.min_errors))
            break
    eb_a = _ebn0_to_db(ca.energy, ca.bits_per_symbol, n0)
    eb_b = _ebn0_to_db(cb.energy, cb.bits_per_symbol, n0) if payload_b else math.nan
    return BerRecord(
        ebn0_db_a=eb_a,
        ebn0_db_b=eb_b,
        n0=n0,
        frames=frames,
        bits_a=frames * payload_a,
        bits_b=frames * payload_b,
        errors_a=tuple(int(e) for e in err_a),
        errors_b=tuple(int(e) for e in err_b) if payload_b else (),
        theory_a=_theory(ca, eb_a),
        theory_b=_theory(cb, eb_b) if payload_b else math.nan,
        capped=capped,
        runtime_s=time.perf_counter() - t0,
    )


def _theory(c: Constellation, ebn0_db: float) -> float:
    if ebn0_db == math.inf:
        return 0.0
    return theoretical_ber(c, ebn0_db)


def run_point(cfg: SimConfig, ebn0_db: float, point_index: int = 0, workers: int = 1) -> BerRecord:
    """Simulate one Eb/N0 value (on the ``cfg.ref_class`` axis)."""
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return _run_point(cfg, ebn0_db, point_index, pool)
    return _run_point(cfg, ebn0_db, point_index, None)


def run_sweep(cfg: SimConfig, workers: int = 1, progress=None) -> list[BerRecord]:
    """One :class:`BerRecord` per sweep value, in sweep order.

    ``progress`` is called with each finished record.
    """
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    records = []
    try:
        for i, ebn0 in enumerate(cfg.sweep):
            rec = _run_point(cfg, ebn0, i, pool)
            records.append(rec)
            if progress is not None:
                progress(rec)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return records
