# %% [markdown]
# # Building one superposed frame
#
# Sixty-four 16-QAM symbols, one per carrier, plus four QPSK symbols spread
# over all carriers with Walsh-Hadamard rows, then OFDM modulation.

# %%
import numpy as np

from noma_sim.constellation import get_constellation
from noma_sim.framing import FramingConfig, compose, from_time, to_time
from noma_sim.walsh import despread, hadamard_matrix

rng = np.random.default_rng(0)
qam = get_constellation("qam16", "lattice")
qpsk = get_constellation("qpsk", "lattice")
cfg = FramingConfig(n=64, m=4)

a = qam.points[rng.integers(0, 16, 64)]
b = qpsk.points[rng.integers(0, 4, 4)]
frame = compose(a, b, cfg)

# %% The spread layer leaks +-1/8 per user per axis onto every carrier
leak = frame.x - a
print("distinct leak values (I):", np.unique(np.round(leak.real, 6)))
print("spread symbols recovered:", np.allclose(despread(leak, cfg.spreading), b))

# %% Rows of the code matrix used by the four users
print(hadamard_matrix(8)[:4])  # first rows of a smaller matrix, for illustration

# %% OFDM modulation with an 8-sample cyclic prefix, and back
s = to_time(frame.x, cfg)
print(len(s), "time samples; prefix matches tail:", np.allclose(s[:8], s[-8:]))
print("round trip exact:", np.allclose(from_time(s, cfg), frame.x))
