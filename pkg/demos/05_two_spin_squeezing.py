# %% [markdown]
# U-V two-spin squeezing and the two-mode entanglement sum for Fock initial
# states. Thresholds: 3/4 for xi_uv and 2 for the sum.

# %%
import numpy as np

from spinorsim import ModelParams, TimeGrid, fock_state, time_series
from spinorsim.fock import ModeOccupation

grid = TimeGrid(steps=256)
for occ in [(0, 100, 0), (1, 98, 1), (25, 50, 25), (50, 0, 50), (25, 0, 75)]:
    s = time_series(fock_state(ModeOccupation(*occ)), ModelParams(), grid, ["xi_uv_min", "two_mode_sum"])
    i = int(np.nanargmin(s["xi_uv_min"]))
    print(f"{str(occ):15s} t=0: xi_uv={s['xi_uv_min'][0]:.3f} sum={s['two_mode_sum'][0]:.3f}   "
          f"min xi_uv={s['xi_uv_min'][i]:.3f} at t={s['t'][i]:.3f}")
