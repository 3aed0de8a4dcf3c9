# %% [markdown]
# Coherent states with eta = 1 live entirely in the l = N multiplet, so their
# populations never move. Other coherent states mix levels and evolve.

# %%
import math

import numpy as np

from spinorsim import CoherentSpec, ModelParams, Propagator, TimeGrid, angular_projection, coherent_state, eta
from spinorsim.squeeze import populations

params = ModelParams()

# %%
for name, spec in [
    ("eta = 1", CoherentSpec.from_populations(60, (0.09, 0.42, 0.49))),
    ("P0 = 1/3, theta = pi/2", CoherentSpec.from_p0_theta(60, 1 / 3, math.pi / 2)),
]:
    state = coherent_state(spec)
    weight_top = sum(abs(c) ** 2 for (l, _), c in angular_projection(state).items() if l == 60)
    prop = Propagator(state, params)
    pops = np.array([populations(prop.at(t)) for t in TimeGrid(steps=64).points])
    print(f"{name:24s} eta = {eta(spec).eta:.3f}  weight at l = N: {weight_top:.6f}  "
          f"max drift: {np.abs(pops - pops[0]).max():.2e}")
