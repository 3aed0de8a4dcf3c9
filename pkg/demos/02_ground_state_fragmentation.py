# %% [markdown]
# Ferromagnetic ground state at m = 0 and its one-particle density matrix.
# The exact block eigenvector is compared with the Gaussian profile on the
# hypercharge lattice and with the approximate nearest-neighbour chain.

# %%
import numpy as np

from spinorsim import chain_solver, gaussian_profile, ground_state, one_particle_density

N = 1000

# %%
energy, state = ground_state(N, 0)
psi = np.real(state.amplitudes)
gauss = gaussian_profile(N)
chain = chain_solver(N, "even").vectors[:, 0]
print("E0 =", energy)
print("|<exact|gauss>|^2 =", np.dot(psi, gauss) ** 2)
print("|<exact|chain>|^2 =", np.dot(psi, chain) ** 2)

# %%
# Peak of the profile sits near n0 = N/2.
n0 = state.layout.occupations[:, 1]
print("argmax n0:", n0[np.argmax(psi)], " <n0> =", np.sum(psi**2 * n0))

# %%
# Two macroscopic eigenvalues: the condensate is fragmented.
rho = one_particle_density(state)
print(np.round(np.real(rho.matrix), 3))
print("eigenvalues:", rho.eigenvalues, "->", rho.verdict)
