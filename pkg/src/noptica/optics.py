"""Coherent neutron optics of a homogeneous medium.

Optical potential, refractive index (Goldberger-Seitz and Lax forms),
interferometric phase shift and the complex optical potential whose
imaginary part accounts for diffuse-scattering losses.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

from .core import CONSTANTS, Beam, Constants, Medium
from .errors import DomainError, TotalReflectionError

__all__ = [
    "PhaseShift",
    "OpticalPotential",
    "optical_potential",
    "refractive_index_gs",
    "refractive_index_lax",
    "phase_shift",
    "complex_optical_potential",
]


@dataclass(frozen=True)
class PhaseShift:
    """chi = chi_prime + i chi_double_prime, in radians."""

    chi_prime: float
    chi_double_prime: float

    @property
    def chi(self) -> complex:
        return complex(self.chi_prime, self.chi_double_prime)

    @property
    def transmission_factor(self) -> complex:
        """exp(i chi); its modulus exp(-chi'') is the amplitude attenuation."""
        return cmath.exp(1j * self.chi)


@dataclass(frozen=True)
class OpticalPotential:
    """Complex optical potential in J. Im <= 0 always (loss, never gain)."""

    value: complex

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag


def optical_potential(medium: Medium, constants: Constants = CONSTANTS) -> float:
    """Real optical potential (2 pi hbar^2 / m) b n_o, in J."""
    return constants.fermi_prefactor * medium.scattering_length * medium.number_density


def _first_order_index(wavelength, n_o, f0):
    # shared by both index forms so that f0 = -b reproduces Goldberger-Seitz bit for bit
    return 1.0 + wavelength**2 / (2.0 * math.pi) * n_o * f0


def refractive_index_gs(
    medium: Medium, beam: Beam, form: Literal["exact", "first_order"] = "exact"
) -> float:
    """Refractive index sqrt(1 - (2 pi hbar^2/(m E)) b n_o) and its first-order expansion.

    Raises
    ------
    TotalReflectionError
        For ``form="exact"`` when the beam energy is below the critical energy.
    """
    if form == "first_order":
        return _first_order_index(beam.wavelength, medium.number_density, -medium.scattering_length)
    if form != "exact":
        raise DomainError(f"form must be 'exact' or 'first_order', got {form!r}")
    c = beam.constants
    radicand = 1.0 - c.fermi_prefactor / beam.energy * medium.scattering_length * medium.number_density
    if radicand < 0:
        raise TotalReflectionError(
            f"beam energy {beam.energy:.4g} J is below the critical energy "
            f"{optical_potential(medium, c):.4g} J (total reflection)"
        )
    return math.sqrt(radicand)


def refractive_index_lax(medium: Medium, beam: Beam, f0: float, c: float = 1.0) -> float:
    """First-order Lax index 1 + (lambda^2 / 2 pi) n_o c f0.

    ``f0`` is the forward scattering amplitude (m); ``c`` is the optional
    local-field correction factor multiplying it (default 1).
    """
    return _first_order_index(beam.wavelength, medium.number_density, f0 * c)


def phase_shift(medium: Medium, beam: Beam, sigma_t: float = 0.0) -> PhaseShift:
    """Phase shift across thickness D with attenuation from cross section ``sigma_t`` (m^2).

    chi' = -n_o b lambda D and chi'' = n_o sigma_t D / 2.
    """
    if not (math.isfinite(sigma_t) and sigma_t >= 0):
        raise DomainError(f"sigma_t must be >= 0, got {sigma_t!r}")
    n_o, D = medium.number_density, medium.thickness
    return PhaseShift(
        chi_prime=-n_o * medium.scattering_length * beam.wavelength * D,
        chi_double_prime=n_o * sigma_t * D / 2.0,
    )


def complex_optical_potential(medium: Medium, beam: Beam, model=None) -> OpticalPotential:
    """Static-limit complex optical potential for a plane wave of momentum p0.

    U = (2 pi hbar^2/m) n_o [b - i (b^2/4pi)(p0/hbar) int dOmega S_c(q)], with
    the solid-angle integral evaluated by :func:`noptica.diffuse.solid_angle_integral`.
    ``model`` defaults to the hard-sphere model of ``medium``.
    """
    from .diffuse import solid_angle_integral

    b = medium.scattering_length
    pref = beam.constants.fermi_prefactor * medium.number_density
    if b == 0.0:
        return OpticalPotential(complex(0.0, 0.0))
    omega = solid_angle_integral(medium, beam, model)
    im = -pref * b * b / (4.0 * math.pi) * beam.wavenumber * omega
    return OpticalPotential(complex(pref * b, im))
