# %% [markdown]
# # Coherent-beam attenuation from the master equation
#
# The neutron lives on a grid of directions on the elastic shell. Jump
# operators move probability between directions at rates set by S_c(q);
# the loss term balances them exactly, so the trace is conserved while the
# beam direction empties.

# %%
import numpy as np

from noptica import Medium, beam_from_wavelength
from noptica.diffuse import attenuation_rate
from noptica.lindblad import (
    build_direction_grid,
    build_jump_operators,
    coherent_survival,
    direction_state,
    evolve,
)

beam = beam_from_wavelength(1.8e-10)
gas = Medium(2.7e25, 6e-15, 3e-10, 1e-2)
grid = build_direction_grid(24, 16)
jumps = build_jump_operators(grid, gas, beam)
print("directions:", grid.size)
print("grid out-rate  :", jumps.out_rates.mean(), "1/s")
print("attenuation    :", attenuation_rate(gas, beam), "1/s")

# %%
j0 = grid.nearest((0, 0, 1))
dt = 0.02 / jumps.out_rates.max()
traj = evolve(direction_state(grid.size, j0), jumps, dt=dt, steps=300, store_every=3)
print("max |trace - 1| :", np.max(np.abs(traj.trace - 1)))
print("min eigenvalue  :", traj.min_eig.min())
print("fitted decay    :", coherent_survival(traj, j0), "1/s")
for t, p in list(zip(traj.times, traj.population(j0)))[::20]:
    print(f"t = {t:.4f} s   rho_beam = {p:.6f}")
