import math

import pytest

from noptica import Medium, beam_from_wavelength

# gaseous sample at a perfect-crystal interferometer
GAS = dict(number_density=2.7e25, scattering_length=6e-15, hard_sphere_diameter=3e-10, thickness=1e-2)
THERMAL_WAVELENGTH = 1.8e-10


@pytest.fixture
def beam():
    return beam_from_wavelength(THERMAL_WAVELENGTH)


@pytest.fixture
def gas():
    return Medium(**GAS)


def medium_with(beam, ka, packing, b=6e-15, D=1e-2):
    """Medium whose hard-sphere diameter gives a*p0/hbar = ka at the given packing fraction."""
    a = ka / beam.wavenumber
    n_o = packing / (4.0 / 3.0 * math.pi * a**3)
    return Medium(n_o, b, a, D)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
