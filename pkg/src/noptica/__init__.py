"""noptica: neutron optics with diffuse scattering in a master-equation picture.

Modules
-------
core : constants, ``Medium`` and ``Beam`` records
structure : static structure function S_c(q) (hard sphere, tabulated, from g(r))
optics : optical potential, refractive indices, phase shifts
diffuse : diffusion cross section, attenuation rate, acceptance integral A(phi)
lindblad : direction-grid master equation with RK4 evolution
wigner : 1-D Wigner transform of momentum-basis density matrices
interferometry : visibility budget and S_c(0) inference
snapshot : binary density-matrix frames
cli : command-line front end (``noptica`` / ``python -m noptica``)
"""

from .core import CONSTANTS, Beam, Constants, Medium, beam_from_wavelength
from .structure import (
    HardSphere,
    PairCorrelation,
    Tabulated,
    pair_correlation_hard_sphere,
    s_static,
    s_zero_sum_rule,
)
from .optics import (
    OpticalPotential,
    PhaseShift,
    complex_optical_potential,
    optical_potential,
    phase_shift,
    refractive_index_gs,
    refractive_index_lax,
)
from .diffuse import (
    acceptance_closed_form,
    acceptance_quadrature,
    acceptance_small_angle,
    attenuation_rate,
    diffusion_cross_section,
)
from .lindblad import (
    build_direction_grid,
    build_jump_operators,
    coherent_survival,
    evolve,
    optical_theorem_residual,
)
from .wigner import MomentumState1D, wigner_transform
from .interferometry import infer_s_zero, visibility_budget
from . import errors

__version__ = "0.1.0"
