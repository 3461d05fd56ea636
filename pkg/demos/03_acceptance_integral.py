# %% [markdown]
# # How many diffusely scattered neutrons enter the detector?
#
# A(phi) is the fraction of neutrons scattered diffusely into polar angles
# below phi. For a perfect-crystal interferometer phi is a few microradians.

# %%
import math

import numpy as np

from noptica import Medium, beam_from_wavelength
from noptica.diffuse import (
    acceptance_closed_form,
    acceptance_quadrature,
    acceptance_small_angle,
    diffusion_cross_section,
)

beam = beam_from_wavelength(1.8e-10)
gas = Medium(2.7e25, 6e-15, 3e-10, 1e-2)

phi = np.logspace(-6, math.log10(math.pi), 8)
closed = acceptance_closed_form(gas, beam, phi)
quad = acceptance_quadrature(gas, beam, None, phi)
small = acceptance_small_angle(gas, beam, phi)
print(f"{'phi':>10} {'closed':>14} {'quadrature':>14} {'small angle':>14}")
for row in zip(phi, closed, quad, small):
    print("".join(f"{v:14.6e}" for v in row))

# %% [markdown]
# Full acceptance recovers n_o sigma_d D; the perfect-crystal acceptance gives
# a correction around 1e-15.

# %%
print("A(pi)         =", acceptance_closed_form(gas, beam, math.pi))
print("n_o sigma_d D =", gas.number_density * diffusion_cross_section(gas, beam) * gas.thickness)
print("A(5 urad)     =", acceptance_closed_form(gas, beam, 5e-6))
