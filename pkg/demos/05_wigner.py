# %% [markdown]
# # Wigner function of a two-component momentum superposition
#
# A superposition of two momenta shows two positive ridges and an
# oscillating interference row halfway between them.

# %%
import numpy as np
from scipy import constants as sc

from noptica.wigner import MomentumState1D, period, wigner_transform

dq = 1e-26
psi = np.zeros(32, complex)
psi[[10, 18]] = 1
state = MomentumState1D.from_amplitudes(psi, 0.0, dq)
x = np.arange(64) * period(dq) / 64
w = wigner_transform(state, x)

for row in (20, 28, 36):
    vals = w.values[:, row] * np.pi * sc.hbar
    print(f"p = {w.p[row]:.2e}:  min {vals.min():+.3f}  max {vals.max():+.3f}")
print("total probability:", w.total())
