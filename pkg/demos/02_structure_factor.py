# %% [markdown]
# # Static structure function of a hard-sphere gas
#
# The same S_c(q) three ways: the analytic hard-sphere transform, radial
# quadrature of the step g(r), and a PCHIP table.

# %%
import math

import numpy as np

from noptica import HardSphere, PairCorrelation, Tabulated, s_static, s_zero_sum_rule, CONSTANTS
from noptica.structure import hard_sphere_samples

a = 3e-10
n_o = 0.05 / (4 / 3 * math.pi * a**3)
hs = HardSphere(a, n_o)
pc = PairCorrelation(*hard_sphere_samples(a, 2 * a), n_o)
tab = Tabulated.from_model(hs, np.linspace(0, 60 / a, 4001))

for qa in (0.0, 1.0, 4.5, 10.0, 30.0):
    q = qa / a
    print(f"qa = {qa:5.1f}:  analytic {s_static(hs, q):.12f}  g(r) {s_static(pc, q):.12f}  table {s_static(tab, q):.12f}")

# %% [markdown]
# At q = 0 the excluded volume lowers S below 1, consistent with the
# compressibility sum rule of a gas with second virial coefficient
# B2 = (2 pi / 3) a^3.

# %%
T = 300.0
B2 = 2 * math.pi / 3 * a**3
chi_T = 1 / (n_o * CONSTANTS.boltzmann * T * (1 + 2 * B2 * n_o))
print("S_c(0) model      :", hs.s_zero)
print("S_c(0) sum rule   :", s_zero_sum_rule(n_o, T, chi_T))
