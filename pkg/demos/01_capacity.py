# %% [markdown]
# # Two-user capacity: superposition vs orthogonal sharing
#
# With no attenuation both schemes reach the single-user capacity. Once the
# second user is 6 dB down, superposition with interference cancellation wins.

# %%
import numpy as np

from noma_sim.capacity import PowerSplit, capacity_sweep, noma_capacity, owma_capacity, power_factor_to_db

quarter = power_factor_to_db(4)  # power divided by 4, i.e. 6.02 dB
ps = PowerSplit(alpha=0.8, p_over_n0=15.0, atten2_db=quarter)
print("NOMA :", noma_capacity(ps))
print("OFDMA:", owma_capacity(ps))

# %% Equal received powers: both equal log2(1 + P/N0) = 4
for alpha in (0.1, 0.5, 0.9):
    flat = PowerSplit(alpha, 15.0)
    print(alpha, noma_capacity(flat).r_total, owma_capacity(flat).r_total)

# %% Gain versus power share
for row in capacity_sweep(np.round(np.arange(0, 1.01, 0.1), 2), 15.0, quarter):
    print(f"alpha={row.split.alpha:.1f}  gain={row.gain_pct:6.2f} %")

# %% Gain versus attenuation at alpha = 0.5
for row in capacity_sweep(0.5, 15.0, [0, 3, 6, 10, 20]):
    print(f"atten={row.split.atten2_db:4.1f} dB  gain={row.gain_pct:6.2f} %")
