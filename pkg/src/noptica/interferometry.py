"""Interferometric consequences of diffuse scattering.

When the reference path of an interferometer is closed, diffusely scattered
neutrons inside the acceptance cone still reach the detector. The flux used
to normalise the fringe amplitude then overstates the coherent flux by A(phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Beam, Medium
from .diffuse import acceptance_quadrature, diffusion_cross_section
from .errors import DomainError, SmallAngleValidityError
from .optics import PhaseShift, phase_shift

__all__ = [
    "VisibilityBudget",
    "visibility_budget",
    "small_angle_ratio",
    "infer_s_zero",
    "FIRST_ORDER_LIMIT",
    "SMALL_ANGLE_LIMIT",
]

# re-entry is added at first order in A; beyond this the budget is flagged
FIRST_ORDER_LIMIT = 0.1
# maximal |phi^4 term / phi^2 term| accepted by infer_s_zero
SMALL_ANGLE_LIMIT = 0.01


@dataclass(frozen=True)
class VisibilityBudget:
    """Flux bookkeeping for a sample of thickness D in one interferometer arm.

    ``transmitted_flux_fraction`` is what a detector sees with the other path
    closed (coherent plus diffuse re-entry); ``corrected_fringe_amplitude``
    uses the coherent flux only, ``uncorrected_fringe_amplitude`` the
    transmitted flux.
    """

    chi: PhaseShift
    A_phi: float
    transmitted_flux_fraction: float
    coherent_flux_fraction: float
    corrected_fringe_amplitude: float
    uncorrected_fringe_amplitude: float
    first_order_valid: bool

    def as_dict(self) -> dict:
        return {
            "chi_prime": self.chi.chi_prime,
            "chi_double_prime": self.chi.chi_double_prime,
            "A_phi": self.A_phi,
            "transmitted_flux_fraction": self.transmitted_flux_fraction,
            "coherent_flux_fraction": self.coherent_flux_fraction,
            "corrected_fringe_amplitude": self.corrected_fringe_amplitude,
            "uncorrected_fringe_amplitude": self.uncorrected_fringe_amplitude,
            "first_order_valid": self.first_order_valid,
        }


def visibility_budget(medium: Medium, beam: Beam, model=None, phi_acceptance: float = 0.0) -> VisibilityBudget:
    """Coherent flux, diffuse re-entry A(phi) and fringe amplitudes.

    The coherent flux is exp(-2 chi'') with sigma_t = sigma_d (no absorption);
    the re-entering diffuse flux A(phi) is added at first order.
    """
    if not (0.0 <= phi_acceptance <= math.pi):
        raise DomainError(f"phi_acceptance must lie in [0, pi], got {phi_acceptance!r}")
    sigma_d = diffusion_cross_section(medium, beam, model)
    chi = phase_shift(medium, beam, sigma_d)
    coherent = math.exp(-2.0 * chi.chi_double_prime)
    A = acceptance_quadrature(medium, beam, model, phi_acceptance) if sigma_d > 0 else 0.0
    transmitted = coherent + A
    return VisibilityBudget(
        chi=chi,
        A_phi=A,
        transmitted_flux_fraction=transmitted,
        coherent_flux_fraction=coherent,
        corrected_fringe_amplitude=math.sqrt(coherent),
        uncorrected_fringe_amplitude=math.sqrt(transmitted),
        first_order_valid=A <= FIRST_ORDER_LIMIT and 2.0 * chi.chi_double_prime <= FIRST_ORDER_LIMIT,
    )


def small_angle_ratio(medium: Medium, beam: Beam, phi: float) -> float:
    """|phi^4 term / phi^2 term| of the small-angle A(phi) for the medium's S_c(0)."""
    s0 = 1.0 - medium.packing_fraction
    ka = medium.hard_sphere_diameter * beam.wavenumber
    return abs(phi * phi * ((1.0 - s0) * ka * ka / 20.0 - s0 / 12.0) / s0)


def infer_s_zero(measured_A: float, medium: Medium, beam: Beam, phi: float, check: bool = True) -> float:
    """S_c(0) from a measured acceptance A(phi) ~ pi n_o b^2 D S_c(0) phi^2.

    With ``check`` the angle must keep the phi^4 correction below
    SMALL_ANGLE_LIMIT of the leading term, judged with the hard-sphere S_c(0)
    of ``medium``.
    """
    if not (measured_A >= 0 and math.isfinite(measured_A)):
        raise DomainError(f"measured_A must be >= 0, got {measured_A!r}")
    if not (0.0 < phi <= math.pi):
        raise DomainError(f"phi must lie in (0, pi], got {phi!r}")
    b = medium.scattering_length
    if b == 0.0:
        raise DomainError("cannot infer S_c(0) with b = 0")
    if check:
        ratio = small_angle_ratio(medium, beam, phi)
        if ratio >= SMALL_ANGLE_LIMIT:
            raise SmallAngleValidityError(
                f"phi = {phi:.3g} rad: phi^4 term is {ratio:.3g} of the leading term "
                f"(limit {SMALL_ANGLE_LIMIT})"
            )
    return measured_A / (math.pi * medium.number_density * b * b * medium.thickness * phi * phi)
