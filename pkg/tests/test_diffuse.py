import math

import numpy as np
import pytest

from noptica import Medium, Tabulated
from noptica.diffuse import (
    AcceptanceCurve,
    acceptance_closed_form,
    acceptance_curve,
    acceptance_quadrature,
    acceptance_small_angle,
    attenuation_rate,
    diffusion_cross_section,
    momentum_transfer,
    solid_angle_integral,
)
from noptica.errors import DomainError, ModelValidityError
from noptica.structure import HardSphere

from conftest import medium_with
from oracles import solid_angle_integral_in_q


def test_momentum_transfer_geometry(beam):
    theta = np.linspace(0, math.pi, 9)
    q = momentum_transfer(beam, theta)
    np.testing.assert_allclose(q, beam.wavenumber * np.sqrt(2 * (1 - np.cos(theta))), rtol=1e-12, atol=1e-3)
    assert q[-1] == pytest.approx(2 * beam.wavenumber)


def test_cross_section_limits(beam):
    iso = Medium(2.7e25, 6e-15, 0.0, 1e-2)
    assert diffusion_cross_section(iso, beam) == pytest.approx(4 * math.pi * 36e-30, rel=1e-12)
    assert diffusion_cross_section(Medium(2.7e25, 0.0, 3e-10, 1e-2), beam) == 0.0
    assert attenuation_rate(Medium(2.7e25, 0.0, 3e-10, 1e-2), beam) == 0.0
    rate = attenuation_rate(iso, beam)
    assert rate == pytest.approx(2.7e25 * beam.velocity * 4 * math.pi * 36e-30, rel=1e-12)


@pytest.mark.parametrize("ka", [0.1, 1.0, 5.0, 30.0])
def test_solid_angle_integral_against_q_variable(beam, ka):
    m = medium_with(beam, ka, 0.05)
    assert solid_angle_integral(m, beam) == pytest.approx(solid_angle_integral_in_q(beam, HardSphere.from_medium(m)), rel=1e-10)


def test_cross_section_equals_full_acceptance(beam):
    m = medium_with(beam, 5.0, 0.01)
    sigma = diffusion_cross_section(m, beam)
    assert acceptance_closed_form(m, beam, math.pi) / (m.number_density * m.thickness) == pytest.approx(sigma, rel=1e-8)
    assert acceptance_quadrature(m, beam, None, math.pi) == pytest.approx(m.number_density * sigma * m.thickness, rel=1e-12)


def test_attenuation_linear_in_density_with_table(beam):
    tab = Tabulated([0.0, 3 * beam.wavenumber], [0.4, 1.2])
    m1 = Medium(1e25, 6e-15, 0.0, 1e-2)
    m2 = Medium(3e25, 6e-15, 0.0, 1e-2)
    assert attenuation_rate(m2, beam, tab) == pytest.approx(3 * attenuation_rate(m1, beam, tab), rel=1e-12)


def test_closed_form_at_zero(beam):
    m = medium_with(beam, 3.0, 0.01)
    assert acceptance_closed_form(m, beam, 0.0) == 0.0
    assert acceptance_small_angle(m, beam, 0.0) == 0.0


def test_phi_domain(beam, gas):
    with pytest.raises(DomainError):
        acceptance_closed_form(gas, beam, -1e-3)
    with pytest.raises(DomainError):
        acceptance_quadrature(gas, beam, None, 3.5)


def test_isotropic_analytic(beam):
    m = Medium(2.7e25, 6e-15, 0.0, 1e-2)
    phi = np.logspace(-6, math.log10(math.pi), 25)
    exact = 2 * math.pi * 2.7e25 * 36e-30 * 1e-2 * 2 * np.sin(phi / 2) ** 2  # 1 - cos without cancellation
    np.testing.assert_allclose(acceptance_quadrature(m, beam, None, phi), exact, rtol=1e-8)
    np.testing.assert_allclose(acceptance_closed_form(m, beam, phi), exact, rtol=1e-8)


def test_half_structure_is_half(beam):
    m = Medium(2.7e25, 6e-15, 0.0, 1e-2)
    half = Tabulated([0.0, 2.5 * beam.wavenumber], [0.5, 0.5])
    phi = np.array([1e-4, 0.3, 2.0])
    np.testing.assert_allclose(
        acceptance_quadrature(m, beam, half, phi), 0.5 * acceptance_quadrature(m, beam, None, phi), rtol=1e-12
    )


def test_small_angle_isotropic_is_cosine_series(beam):
    m = Medium(2.7e25, 6e-15, 0.0, 1e-2)
    phi = np.array([1e-3, 1e-2, 0.05])
    pref = math.pi * 2.7e25 * 36e-30 * 1e-2
    np.testing.assert_allclose(acceptance_small_angle(m, beam, phi), pref * (phi**2 - phi**4 / 12), rtol=1e-14)


def test_small_angle_leading_term(gas, beam):
    s0 = 1 - gas.packing_fraction
    lead = acceptance_small_angle(gas, beam, 1e-5, leading_only=True)
    assert lead == pytest.approx(math.pi * gas.number_density * 36e-30 * gas.thickness * s0 * 1e-10, rel=1e-14)


@pytest.mark.parametrize("ka", [0.1, 1.0, 10.0])
def test_small_angle_error_order(beam, ka):
    m = medium_with(beam, ka, 0.01)
    phi = 1e-3 * 2.0 ** np.arange(0, 7)
    err = np.abs(acceptance_small_angle(m, beam, phi) - acceptance_closed_form(m, beam, phi))
    ratio = err[1:] / err[:-1]
    assert np.all((ratio >= 32) & (ratio <= 128))


def test_monotone_and_linear_scaling(beam):
    m = medium_with(beam, 8.0, 0.05)
    phi = np.linspace(0, math.pi, 200)
    A = acceptance_quadrature(m, beam, None, phi)
    assert np.all(np.diff(A) >= 0)
    m2 = Medium(m.number_density, 2 * m.scattering_length, m.hard_sphere_diameter, 3 * m.thickness)
    for f in (acceptance_closed_form, acceptance_small_angle):
        np.testing.assert_allclose(f(m2, beam, phi[:50]), 12 * f(m, beam, phi[:50]), rtol=1e-12)
    np.testing.assert_allclose(acceptance_quadrature(m2, beam, None, phi), 12 * A, rtol=1e-12)
    assert diffusion_cross_section(m2, beam) == pytest.approx(4 * diffusion_cross_section(m, beam), rel=1e-12)


def test_negative_structure_rejected(beam):
    m = Medium(2.7e25, 6e-15, 0.0, 1e-2)

    class Negative:
        def __call__(self, q):
            return np.full_like(np.asarray(q, dtype=float), -0.1)

    with pytest.raises(ModelValidityError):
        diffusion_cross_section(m, beam, Negative())


def test_acceptance_curve_record(beam, gas):
    curve = acceptance_curve(gas, beam, np.linspace(0, 1e-3, 5))
    assert isinstance(curve, AcceptanceCurve)
    assert curve.A[0] == 0.0
    assert curve.metadata["method"] == "closed"
    with pytest.raises(DomainError):
        AcceptanceCurve(np.array([0.1, 0.05]), np.array([1.0, 2.0]))
