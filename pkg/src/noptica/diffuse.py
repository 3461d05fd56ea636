"""Diffuse (incoherent) scattering in the static approximation.

Elastic kinematics on the shell |p| = p0: a neutron deflected by polar angle
theta transfers wavenumber q(theta) = 2 (p0/hbar) sin(theta/2). The
acceptance integral

    A(phi) = 2 pi n_o b^2 D int_0^phi sin(theta) S_c(q(theta)) dtheta

is the probability that a neutron crossing thickness D is diffusely
scattered into polar angles below phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .core import Beam, Medium
from .errors import DomainError, ModelValidityError, NumericError
from .structure import HardSphere, _sinc_minus_one, s_static

__all__ = [
    "AcceptanceCurve",
    "momentum_transfer",
    "solid_angle_integral",
    "diffusion_cross_section",
    "attenuation_rate",
    "acceptance_closed_form",
    "acceptance_quadrature",
    "acceptance_small_angle",
    "acceptance_curve",
]

QUAD_EPSREL = 1e-12
QUAD_LIMIT = 500


@dataclass(frozen=True)
class AcceptanceCurve:
    phi: np.ndarray
    A: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        phi = np.asarray(self.phi)
        if phi.ndim != 1 or phi.shape != np.shape(self.A):
            raise DomainError("phi and A must be 1-D arrays of equal length")
        if np.any(np.diff(phi) <= 0) or phi[0] < 0 or phi[-1] > math.pi:
            raise DomainError("phi must be strictly increasing within [0, pi]")


def momentum_transfer(beam: Beam, theta):
    """Wavenumber transfer 2 (p0/hbar) sin(theta/2) for elastic deflection by ``theta``."""
    return 2.0 * beam.wavenumber * np.sin(np.asarray(theta, dtype=float) / 2.0)


def _model_for(medium, model):
    return HardSphere.from_medium(medium) if model is None else model


def _check_phi(phi):
    phi_arr = np.asarray(phi, dtype=float)
    if np.any(~np.isfinite(phi_arr)) or np.any(phi_arr < 0) or np.any(phi_arr > math.pi):
        raise DomainError("acceptance angle must lie in [0, pi]")
    return phi_arr


def _sin_weighted_integral(beam, model, lo, hi):
    """int_lo^hi sin(theta) S_c(q(theta)) dtheta by adaptive quadrature."""
    if hi <= lo:
        return 0.0
    k2 = 2.0 * beam.wavenumber
    lowest = [math.inf]

    def f(theta):
        s = float(model(np.array([k2 * math.sin(theta / 2.0)]))[0])
        if s < lowest[0]:
            lowest[0] = s
        return math.sin(theta) * s

    res = integrate.quad(
        f, lo, hi, epsabs=0.0, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, full_output=1
    )
    val, err, info = res[0], res[1], res[2]
    if lowest[0] < 0:
        raise ModelValidityError(
            f"structure model returned S_c = {lowest[0]:.4g} < 0 inside [{lo:.4g}, {hi:.4g}] rad"
        )
    if len(res) > 3 and abs(err) > 1e-10 * max(abs(val), 1e-300):
        raise NumericError(
            f"angular quadrature on [{lo:.4g}, {hi:.4g}] rad did not converge: "
            f"value {val:.6g}, error estimate {err:.3g}, {info['neval']} evaluations; {res[3]}"
        )
    return val


def solid_angle_integral(medium: Medium, beam: Beam, model=None) -> float:
    """int dOmega S_c(q) over the full sphere (sr)."""
    model = _model_for(medium, model)
    return 2.0 * math.pi * _sin_weighted_integral(beam, model, 0.0, math.pi)


def diffusion_cross_section(medium: Medium, beam: Beam, model=None) -> float:
    """Total diffusion cross section per particle sigma_d = b^2 int dOmega S_c(q), in m^2."""
    b = medium.scattering_length
    if b == 0.0:
        return 0.0
    return b * b * solid_angle_integral(medium, beam, model)


def attenuation_rate(medium: Medium, beam: Beam, model=None) -> float:
    """Loss rate of the coherent beam n_o (p0/m) sigma_d, in s^-1."""
    return medium.number_density * beam.velocity * diffusion_cross_section(medium, beam, model)


def acceptance_closed_form(medium: Medium, beam: Beam, phi):
    """Closed-form A(phi) for the hard-sphere gas described by ``medium``.

    A = 2 pi n_o b^2 D {(1 - cos phi) + 3 [1 - S_c(0)] (1/ka)^2 [sin(x)/x - 1]},
    with ka = a p0/hbar and x = ka sqrt(2(1 - cos phi)).
    """
    phi_arr = _check_phi(phi)
    half = np.sin(phi_arr / 2.0)
    one_minus_cos = 2.0 * half * half
    bracket = one_minus_cos
    a = medium.hard_sphere_diameter
    if a > 0.0:
        ka = a * beam.wavenumber
        eta = medium.packing_fraction  # = 1 - S_c(0)
        bracket = one_minus_cos + 3.0 * eta / ka**2 * _sinc_minus_one(2.0 * ka * half)
    out = _prefactor(medium) * bracket
    return float(out) if np.ndim(phi) == 0 else out


def acceptance_quadrature(medium: Medium, beam: Beam, model=None, phi=math.pi):
    """A(phi) by adaptive quadrature for any structure model (defaults to hard spheres)."""
    model = _model_for(medium, model)
    phi_arr = _check_phi(phi)
    flat = phi_arr.ravel()
    # accumulate over sorted breakpoints so each interval is integrated once
    order = np.argsort(flat)
    vals = np.empty_like(flat)
    acc, prev = 0.0, 0.0
    for idx in order:
        p = float(flat[idx])
        acc += _sin_weighted_integral(beam, model, prev, p)
        prev = p
        vals[idx] = acc
    out = _prefactor(medium) * vals.reshape(phi_arr.shape)
    return float(out) if np.ndim(phi) == 0 else out


def acceptance_small_angle(medium: Medium, beam: Beam, phi, leading_only: bool = False):
    """Small-angle expansion of the hard-sphere A(phi).

    pi n_o b^2 D {phi^2 S_c(0) + phi^4 [(1/20)(1 - S_c(0)) ka^2 - S_c(0)/12]};
    with ``leading_only`` only the phi^2 term is kept. The caller is
    responsible for phi being small.
    """
    phi_arr = np.asarray(phi, dtype=float)
    s0 = 1.0 - medium.packing_fraction
    ka = medium.hard_sphere_diameter * beam.wavenumber
    p2 = phi_arr * phi_arr
    poly = p2 * s0
    if not leading_only:
        poly = poly + p2 * p2 * ((1.0 - s0) * ka * ka / 20.0 - s0 / 12.0)
    out = 0.5 * _prefactor(medium) * poly
    return float(out) if np.ndim(phi) == 0 else out


def acceptance_curve(
    medium: Medium, beam: Beam, phi, model=None, method: str = "closed"
) -> AcceptanceCurve:
    """Sample A on the angles ``phi`` with ``method`` in {"closed", "quadrature", "small_angle"}."""
    phi = np.asarray(phi, dtype=float)
    if method == "closed":
        A = acceptance_closed_form(medium, beam, phi)
    elif method == "quadrature":
        A = acceptance_quadrature(medium, beam, model, phi)
    elif method == "small_angle":
        A = acceptance_small_angle(medium, beam, phi)
    else:
        raise DomainError(f"unknown method {method!r}")
    meta = {"medium": medium, "beam": beam, "model": _model_for(medium, model), "method": method}
    return AcceptanceCurve(phi, np.asarray(A), meta)


def _prefactor(medium):
    b = medium.scattering_length
    return 2.0 * math.pi * medium.number_density * b * b * medium.thickness
