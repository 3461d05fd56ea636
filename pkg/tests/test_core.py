import math

import pytest
from hypothesis import given, strategies as st
from scipy import constants as sc

from noptica import CONSTANTS, Beam, Medium, beam_from_wavelength
from noptica.errors import DomainError


def test_constants_are_codata():
    assert CONSTANTS.hbar == sc.hbar
    assert CONSTANTS.neutron_mass == sc.m_n
    assert CONSTANTS.boltzmann == sc.k
    with pytest.raises(AttributeError):
        CONSTANTS.hbar = 1.0


def test_thermal_beam():
    lam = 1.8e-10
    beam = beam_from_wavelength(lam)
    assert beam.p0 == pytest.approx(2 * math.pi * sc.hbar / lam, rel=1e-15)
    # E from de Broglie in terms of Planck's h
    assert beam.energy == pytest.approx(sc.h**2 / (2 * sc.m_n * lam**2), rel=1e-14)
    assert beam.energy / sc.e * 1e3 == pytest.approx(25.25, abs=0.01)  # meV


@pytest.mark.parametrize("lam", [0.0, -1e-10, math.inf, math.nan])
def test_bad_wavelength(lam):
    with pytest.raises(DomainError):
        beam_from_wavelength(lam)


@given(st.floats(min_value=1e-30, max_value=1e-18))
def test_wavelength_round_trip(p0):
    beam = Beam(p0)
    assert beam_from_wavelength(beam.wavelength).p0 == pytest.approx(p0, rel=1e-15)
    assert beam.wavelength * p0 == pytest.approx(2 * math.pi * sc.hbar, rel=1e-15)


def test_medium_guards():
    Medium(1e28, 5e-15, 1e-10, 1e-3, temperature=300.0)
    with pytest.raises(DomainError):
        Medium(0.0, 5e-15, 1e-10, 1e-3)
    with pytest.raises(DomainError):
        Medium(1e28, 5e-15, -1e-10, 1e-3)
    with pytest.raises(DomainError):
        Medium(1e28, 5e-15, 1e-10, 0.0)
    with pytest.raises(DomainError):
        Medium(1e28, 5e-15, 1e-10, 1e-3, temperature=-1.0)
    with pytest.raises(DomainError):
        Medium(1e28, 5e-15j, 1e-10, 1e-3)


def test_packing_fraction_guard():
    a = 3e-10
    n_full = 1.0 / (4.0 / 3.0 * math.pi * a**3)
    assert Medium(0.5 * n_full, 5e-15, a, 1e-3).packing_fraction == pytest.approx(0.5)
    with pytest.raises(DomainError, match="packing"):
        Medium(1.01 * n_full, 5e-15, a, 1e-3)
