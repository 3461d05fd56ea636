"""Physical constants and the two parameter records shared by all modules.

Everything is SI internally: metres, kilograms, seconds, joules, kelvin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy import constants as _codata

from .errors import DomainError

__all__ = ["Constants", "CONSTANTS", "Medium", "Beam", "beam_from_wavelength"]


@dataclass(frozen=True)
class Constants:
    """CODATA values used throughout (taken from :mod:`scipy.constants`)."""

    hbar: float = _codata.hbar
    neutron_mass: float = _codata.m_n
    boltzmann: float = _codata.k

    @property
    def fermi_prefactor(self) -> float:
        """2*pi*hbar**2/m, the strength of the Fermi pseudopotential per unit b."""
        return 2.0 * math.pi * self.hbar**2 / self.neutron_mass


CONSTANTS = Constants()


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class Medium:
    """Homogeneous macroscopic medium.

    Parameters
    ----------
    number_density : float
        Particle number density n_o in m^-3.
    scattering_length : float
        Bound coherent scattering length b in m. Real: absorption is not modelled.
    hard_sphere_diameter : float
        Atomic diameter a in m (0 means no excluded volume).
    thickness : float
        Sample thickness D in m.
    temperature : float, optional
        Temperature in K; only needed for the compressibility sum rule.
    """

    number_density: float
    scattering_length: float
    hard_sphere_diameter: float = 0.0
    thickness: float = 1.0
    temperature: Optional[float] = None

    def __post_init__(self):
        _positive("number_density", self.number_density)
        _positive("thickness", self.thickness)
        b = self.scattering_length
        if isinstance(b, complex) or not math.isfinite(b):
            raise DomainError(f"scattering_length must be real and finite, got {b!r}")
        a = self.hard_sphere_diameter
        if not (math.isfinite(a) and a >= 0):
            raise DomainError(f"hard_sphere_diameter must be >= 0, got {a!r}")
        if self.temperature is not None:
            _positive("temperature", self.temperature)
        if self.packing_fraction >= 1.0:
            raise DomainError(
                f"packing fraction {self.packing_fraction:.3g} >= 1; "
                "dilute hard-sphere description does not apply"
            )

    @property
    def packing_fraction(self) -> float:
        """(4/3) pi a^3 n_o."""
        return 4.0 / 3.0 * math.pi * self.hard_sphere_diameter**3 * self.number_density


@dataclass(frozen=True)
class Beam:
    """Monochromatic incident neutron beam of momentum ``p0`` (kg m/s)."""

    p0: float
    constants: Constants = CONSTANTS

    def __post_init__(self):
        _positive("p0", self.p0)

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi * self.constants.hbar / self.p0

    @property
    def energy(self) -> float:
        return self.p0**2 / (2.0 * self.constants.neutron_mass)

    @property
    def wavenumber(self) -> float:
        """p0/hbar in m^-1."""
        return self.p0 / self.constants.hbar

    @property
    def velocity(self) -> float:
        return self.p0 / self.constants.neutron_mass


def beam_from_wavelength(wavelength: float, constants: Constants = CONSTANTS) -> Beam:
    """Beam with de Broglie wavelength ``wavelength`` (m)."""
    _positive("wavelength", wavelength)
    return Beam(2.0 * math.pi * constants.hbar / wavelength, constants)
