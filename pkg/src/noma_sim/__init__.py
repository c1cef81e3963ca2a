"""Baseband simulator for OFDMA / MC-CDMA superposition with iterative interference cancellation."""

from .capacity import (
    CapacityResult,
    CapacityRow,
    PowerSplit,
    capacity_sweep,
    noma_capacity,
    owma_capacity,
    power_factor_to_db,
)
from .channel import ChannelConfig, add_noise, class_gain_db_to_amplitude
from .constellation import (
    QAM16,
    QPSK,
    Constellation,
    get_constellation,
    hard_slice,
    map_bits,
    slice_indices,
    theoretical_ber,
)
from .framing import FramingConfig, NomaFrame, compose, from_time, to_time
from .montecarlo import BerRecord, SimConfig, build_sim_config, run_point, run_sweep
from .receiver import ReceiverConfig, SicTrace, detect, overload_margin
from .walsh import SpreadingConfig, despread, hadamard_matrix, spread

__version__ = "0.1.0"
