# %% [markdown]
# # The iterative receiver on one noisy frame
#
# We look at decisions per iteration and at the overload diagnostic that
# explains why eight spread users on 64 carriers is too many for hard decisions.

# %%
import warnings

import numpy as np

from noma_sim.channel import add_noise
from noma_sim.constellation import get_constellation
from noma_sim.framing import FramingConfig, compose
from noma_sim.receiver import ReceiverConfig, detect, format_trace, overload_margin
from noma_sim.walsh import SpreadingConfig

qam = get_constellation("qam16", "lattice")
qpsk = get_constellation("qpsk", "lattice")
rng = np.random.default_rng(1)

for m in (4, 8):
    cfg = ReceiverConfig(SpreadingConfig(64, m), qam, qpsk, iterations=3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        print(overload_margin(cfg).report(), "\n")
    ia = rng.integers(0, 16, (2000, 64))
    ib = rng.integers(0, 4, (2000, m))
    x = compose(qam.points[ia], qpsk.points[ib], FramingConfig(64, m)).x
    r = add_noise(x, 0.1, rng)  # high SNR
    tr = detect(r, cfg)
    for i in range(3):
        sa = np.mean(tr.a_idx[i] != ia)
        sb = np.mean(tr.b_idx[i] != ib)
        print(f"M={m} iteration {i + 1}: OFDMA SER={sa:.2e}  MC-CDMA SER={sb:.2e}")
    print()

# %% Decision trace of the first frame of the last (M=8) batch
print(format_trace(detect(r[0], cfg), cfg))
