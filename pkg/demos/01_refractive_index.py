# %% [markdown]
# # Refractive index and phase shift of a gas cell
#
# A thermal neutron (1.8 Å) crosses 1 cm of a dilute gas. The optical
# potential fixes the refractive index; the phase shift follows from it.

# %%
import math

from noptica import (
    Medium,
    beam_from_wavelength,
    complex_optical_potential,
    optical_potential,
    phase_shift,
    refractive_index_gs,
    refractive_index_lax,
)
from noptica.diffuse import diffusion_cross_section

beam = beam_from_wavelength(1.8e-10)
gas = Medium(number_density=2.7e25, scattering_length=6e-15, hard_sphere_diameter=3e-10, thickness=1e-2)
print(f"E = {beam.energy:.4e} J, v = {beam.velocity:.1f} m/s")

# %% [markdown]
# The optical potential is tiny compared with the beam energy, so the
# exact and first-order indices agree to many digits.

# %%
U = optical_potential(gas)
n_exact = refractive_index_gs(gas, beam, "exact")
n_first = refractive_index_gs(gas, beam, "first_order")
print(f"U = {U:.4e} J   U/E = {U / beam.energy:.3e}")
print(f"1 - n (exact)       = {1 - n_exact:.10e}")
print(f"1 - n (first order) = {1 - n_first:.10e}")
print("Lax with f0 = -b reproduces it:", refractive_index_lax(gas, beam, -gas.scattering_length) == n_first)

# %% [markdown]
# Diffuse scattering removes neutrons from the coherent wave: with
# sigma_t = sigma_d the phase shift acquires an imaginary part.

# %%
sigma_d = diffusion_cross_section(gas, beam)
chi = phase_shift(gas, beam, sigma_d)
print(f"sigma_d = {sigma_d:.4e} m^2 (isotropic value 4 pi b^2 = {4 * math.pi * 6e-15**2:.4e})")
print(f"chi' = {chi.chi_prime:.5f} rad, chi'' = {chi.chi_double_prime:.3e}")
print(f"|exp(i chi)| = {abs(chi.transmission_factor):.10f}")
print("complex optical potential:", complex_optical_potential(gas, beam).value)
