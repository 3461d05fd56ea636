# %% [markdown]
# # Visibility budget and an S_c(0) measurement
#
# Closing the reference path lets diffusely scattered neutrons inside the
# acceptance cone reach the detector. Normalising the fringes to that flux
# overstates the visibility. Conversely, the extra flux measures S_c(0).

# %%
from noptica import Medium, beam_from_wavelength
from noptica.diffuse import acceptance_closed_form
from noptica.interferometry import infer_s_zero, visibility_budget

beam = beam_from_wavelength(1.8e-10)
gas = Medium(2.7e25, 6e-15, 3e-10, 1e-2)
for phi in (5e-6, 1e-3, 0.1):
    vb = visibility_budget(gas, beam, None, phi)
    print(f"phi = {phi:7.1e}: A = {vb.A_phi:.3e}, fringe amplitude {vb.uncorrected_fringe_amplitude:.12f} -> {vb.corrected_fringe_amplitude:.12f}")

# %%
A = acceptance_closed_form(gas, beam, 1e-4)
print("inferred S_c(0):", infer_s_zero(A, gas, beam, 1e-4))
print("model S_c(0)   :", 1 - gas.packing_fraction)
