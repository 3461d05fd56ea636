"""Master equation for a neutron on the elastic momentum shell.

The neutron state is a density matrix over a discrete set of momentum
directions p0 * n_i. Diffuse scattering enters through jump operators
L_ij = sqrt(hbar R_ij) |i><j| with rates

    R_ij = n_o (p0/m) b^2 S_c(q_ij) w_i,    q_ij = (p0/hbar) |n_i - n_j|,

and the loss operator Gamma = 1/2 sum L^dag L is diagonal with entries
gamma_j = (hbar/2) sum_i R_ij. The generator

    d rho/dt = -(i/hbar)[H, rho] - (1/hbar){Gamma, rho} + (1/hbar) sum L rho L^dag

is integrated with fixed-step RK4; the trace is never renormalised.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import CONSTANTS, Beam, Medium
from .errors import DomainError, GridError, ModelValidityError, NumericError, StepSizeError
from .structure import HardSphere

__all__ = [
    "DirectionGrid",
    "JumpOperatorSet",
    "Trajectory",
    "FitQualityWarning",
    "build_direction_grid",
    "build_jump_operators",
    "check_density_matrix",
    "direction_state",
    "generator",
    "evolve",
    "optical_theorem_residual",
    "coherent_survival",
    "STABILITY_LIMIT",
]

STABILITY_LIMIT = 0.1


class FitQualityWarning(UserWarning):
    """Exponential fit of a population is of doubtful quality."""


@dataclass(frozen=True)
class DirectionGrid:
    """Product grid (Gauss-Legendre in cos(theta)) x (uniform azimuth) of unit vectors.

    Index ``i = ip * n_azimuth + ia``.
    """

    n_polar: int
    n_azimuth: int
    cos_theta: np.ndarray
    azimuth: np.ndarray
    polar_weights: np.ndarray
    directions: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return self.n_polar * self.n_azimuth

    def integrate(self, values) -> float:
        """Quadrature of per-direction ``values`` over solid angle."""
        return float(np.dot(self.weights, values))

    def nearest(self, direction=(0.0, 0.0, 1.0)) -> int:
        """Index of the grid direction closest to ``direction``."""
        d = np.asarray(direction, dtype=float)
        return int(np.argmax(self.directions @ (d / np.linalg.norm(d))))


def build_direction_grid(n_polar: int, n_azimuth: int, max_polar: Optional[float] = None) -> DirectionGrid:
    """Gauss-Legendre x uniform-azimuth grid on the unit sphere.

    With ``max_polar`` the polar nodes cover only the cap theta <= max_polar
    and the weights sum to 2 pi (1 - cos max_polar).
    """
    if int(n_polar) != n_polar or int(n_azimuth) != n_azimuth:
        raise GridError("grid sizes must be integers")
    if n_polar < 2 or n_azimuth < 1:
        raise GridError(f"need n_polar >= 2 and n_azimuth >= 1, got ({n_polar}, {n_azimuth})")
    x, w = np.polynomial.legendre.leggauss(int(n_polar))
    lo = -1.0
    if max_polar is not None:
        if not (0 < max_polar <= math.pi):
            raise GridError(f"max_polar must lie in (0, pi], got {max_polar!r}")
        lo = math.cos(max_polar)
    # map [-1, 1] -> [lo, 1]
    half = (1.0 - lo) / 2.0
    ct = lo + half * (x + 1.0)
    wp = w * half
    psi = 2.0 * math.pi * np.arange(n_azimuth) / n_azimuth
    st = np.sqrt(np.clip(1.0 - ct * ct, 0.0, None))
    dirs = np.empty((n_polar, n_azimuth, 3))
    dirs[..., 0] = st[:, None] * np.cos(psi)[None, :]
    dirs[..., 1] = st[:, None] * np.sin(psi)[None, :]
    dirs[..., 2] = ct[:, None]
    weights = np.repeat(wp * (2.0 * math.pi / n_azimuth), n_azimuth)
    return DirectionGrid(
        int(n_polar), int(n_azimuth), ct, psi, wp, dirs.reshape(-1, 3), weights
    )


@dataclass(frozen=True)
class JumpOperatorSet:
    """Rates R[i, j] (s^-1) for transitions j -> i and the derived loss operator.

    ``gamma`` holds the diagonal of Gamma = 1/2 sum L^dag L in J.
    ``energy`` is the kinetic energy p0^2/2m shared by every grid direction.
    """

    rates: np.ndarray
    hbar: float = CONSTANTS.hbar
    energy: float = 0.0
    gamma: np.ndarray = field(init=False)

    def __post_init__(self):
        R = np.asarray(self.rates, dtype=float)
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise DomainError("rates must be a square matrix")
        if np.any(R < 0) or not np.all(np.isfinite(R)):
            raise DomainError("rates must be finite and non-negative")
        object.__setattr__(self, "rates", R)
        object.__setattr__(self, "gamma", 0.5 * self.hbar * R.sum(axis=0))

    @property
    def size(self) -> int:
        return self.rates.shape[0]

    @property
    def out_rates(self) -> np.ndarray:
        """Total rate 2 gamma_j / hbar of leaving direction j (self-jumps included)."""
        return 2.0 * self.gamma / self.hbar

    def operator(self, i: int, j: int) -> np.ndarray:
        """Dense L_ij = sqrt(hbar R_ij) |i><j|."""
        L = np.zeros((self.size, self.size), dtype=complex)
        L[i, j] = math.sqrt(self.hbar * self.rates[i, j])
        return L

    def loss_operator(self) -> np.ndarray:
        return np.diag(self.gamma).astype(complex)

    def scaled(self, factor: float) -> "JumpOperatorSet":
        return JumpOperatorSet(self.rates * factor, self.hbar, self.energy)


def build_jump_operators(
    grid: DirectionGrid, medium: Medium, beam: Beam, model=None
) -> JumpOperatorSet:
    """Jump rates R_ij = n_o (p0/m) b^2 S_c(q_ij) w_i on ``grid``.

    ``model`` defaults to the hard-sphere model of ``medium``. S_c is
    evaluated once per distinct (polar_i, polar_j, azimuth difference).
    """
    model = HardSphere.from_medium(medium) if model is None else model
    ct, st = grid.cos_theta, np.sqrt(np.clip(1.0 - grid.cos_theta**2, 0.0, None))
    na = grid.n_azimuth
    cos_dpsi = np.cos(2.0 * math.pi * np.arange(na) / na)
    cos_angle = ct[:, None, None] * ct[None, :, None] + st[:, None, None] * st[None, :, None] * cos_dpsi
    chord = np.sqrt(np.clip(2.0 - 2.0 * cos_angle, 0.0, None))
    q = beam.wavenumber * chord
    S = np.asarray(model(q), dtype=float)
    if np.any(S < 0):
        raise ModelValidityError(f"structure model returned S_c = {S.min():.4g} < 0 on the grid")
    # expand S[pi, pj, (ai - aj) mod na] to the full (i, j) matrix
    ai = np.arange(na)
    dmod = (ai[:, None] - ai[None, :]) % na
    S_full = S[:, None, :, :][:, :, :, dmod]  # (pi, 1, pj, ai, aj)
    S_full = S_full[:, 0].transpose(0, 2, 1, 3).reshape(grid.size, grid.size)
    b = medium.scattering_length
    c = medium.number_density * beam.velocity * b * b
    R = c * S_full * grid.weights[:, None]
    return JumpOperatorSet(R, beam.constants.hbar, beam.energy)


def check_density_matrix(rho, tol_herm=1e-12, tol_trace=1e-12, tol_eig=1e-9) -> np.ndarray:
    """Validate a density matrix and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > tol_herm:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol_trace:
        raise DomainError(f"density matrix trace {np.trace(rho).real:.15g} != 1")
    if np.linalg.eigvalsh(rho).min() < -tol_eig:
        raise DomainError("density matrix has negative eigenvalues")
    return rho


def direction_state(n: int, j: int) -> np.ndarray:
    """Pure state |j><j| on an ``n``-direction grid."""
    rho = np.zeros((n, n), dtype=complex)
    rho[j, j] = 1.0
    return rho


class _Generator:
    """Precomputed pieces of the Lindblad generator for diagonal H."""

    def __init__(self, jumps: JumpOperatorSet, h_diag):
        hbar = jumps.hbar
        h = np.asarray(h_diag, dtype=float)
        g = jumps.gamma
        # element-wise action of -(i/hbar)[H, .] - (1/hbar){Gamma, .}
        self.decay = -1j / hbar * (h[:, None] - h[None, :]) - (g[:, None] + g[None, :]) / hbar
        self.rates = jumps.rates
        self.commutator_vanishes = bool(np.all(h == h[0]))

    def __call__(self, rho):
        out = self.decay * rho
        gain = self.rates @ np.real(np.diagonal(rho))
        idx = np.diag_indices_from(out)
        out[idx] += gain
        return out


def generator(rho, jumps: JumpOperatorSet, u_real: float = 0.0):
    """Right-hand side d rho/dt of the master equation."""
    h = np.full(jumps.size, jumps.energy + u_real)
    return _Generator(jumps, h)(np.asarray(rho, dtype=complex))


def optical_theorem_residual(rho, jumps: JumpOperatorSet, relative: bool = False) -> float:
    """|Tr(sum L rho L^dag)/hbar - Tr({Gamma, rho})/hbar|.

    Vanishes up to round-off because Gamma = 1/2 sum L^dag L. With
    ``relative`` the residual is divided by the loss trace.
    """
    pops = np.real(np.diagonal(np.asarray(rho)))
    gain = float(np.sum(jumps.rates @ pops))
    loss = float(2.0 * np.dot(jumps.gamma, pops) / jumps.hbar)
    res = abs(gain - loss)
    if relative:
        return res / abs(loss) if loss != 0.0 else res
    return res


@dataclass
class Trajectory:
    """Stored states of an evolution with per-step diagnostics."""

    times: np.ndarray
    states: np.ndarray
    steps: np.ndarray
    trace: np.ndarray
    min_eig: np.ndarray
    hermiticity: np.ndarray
    ot_residual: np.ndarray
    commutator_vanishes: bool = True

    def population(self, j: int) -> np.ndarray:
        return np.real(self.states[:, j, j])


def evolve(
    rho0,
    jumps: JumpOperatorSet,
    u_real: float = 0.0,
    dt: float = 1e-3,
    steps: int = 1000,
    store_every: int = 1,
) -> Trajectory:
    """Integrate the master equation with classic RK4.

    H = p0^2/2m + u_real is uniform over the elastic shell, so the commutator
    vanishes here; it is still applied for generality.

    Raises
    ------
    StepSizeError
        If dt * max_j(2 gamma_j/hbar) >= STABILITY_LIMIT.
    NumericError
        If a non-finite value appears.
    """
    rho = check_density_matrix(rho0).copy()
    if rho.shape[0] != jumps.size:
        raise DomainError(f"state size {rho.shape[0]} does not match {jumps.size} jump directions")
    if not (dt > 0) or steps < 1 or store_every < 1:
        raise DomainError("need dt > 0, steps >= 1, store_every >= 1")
    max_rate = float(np.max(jumps.out_rates)) if jumps.size else 0.0
    if dt * max_rate >= STABILITY_LIMIT:
        raise StepSizeError(
            f"dt * max out-rate = {dt * max_rate:.3g} >= {STABILITY_LIMIT}; "
            f"use dt < {STABILITY_LIMIT / max_rate:.4g} s"
        )
    gen = _Generator(jumps, np.full(jumps.size, jumps.energy + u_real))

    stored = [0] + [k for k in range(store_every, steps + 1, store_every)]
    if stored[-1] != steps:
        stored.append(steps)
    n_out = len(stored)
    states = np.empty((n_out,) + rho.shape, dtype=complex)
    diag = {k: np.empty(n_out) for k in ("trace", "min_eig", "hermiticity", "ot_residual")}

    def record(slot, r):
        states[slot] = r
        diag["trace"][slot] = np.trace(r).real
        diag["min_eig"][slot] = np.linalg.eigvalsh(0.5 * (r + r.conj().T)).min()
        diag["hermiticity"][slot] = np.max(np.abs(r - r.conj().T))
        diag["ot_residual"][slot] = optical_theorem_residual(r, jumps, relative=True)

    record(0, rho)
    slot = 1
    half = 0.5 * dt
    for step in range(1, steps + 1):
        k1 = gen(rho)
        k2 = gen(rho + half * k1)
        k3 = gen(rho + half * k2)
        k4 = gen(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(rho)):
            raise NumericError(f"non-finite density matrix at step {step}")
        if slot < n_out and stored[slot] == step:
            record(slot, rho)
            slot += 1

    steps_arr = np.array(stored)
    return Trajectory(
        times=steps_arr * dt,
        states=states,
        steps=steps_arr,
        commutator_vanishes=gen.commutator_vanishes,
        **diag,
    )


def coherent_survival(traj: Trajectory, j0: int, decades: float = 1.0) -> float:
    """Decay rate (s^-1) of the population rho_{j0 j0} fitted over its first decade(s).

    A least-squares line is fitted to log rho_{j0 j0}(t) over the initial
    stretch where the population stays above 10**-decades of its start.
    Emits :class:`FitQualityWarning` (with R^2) for non-monotone populations.
    """
    pop = traj.population(j0)
    t = traj.times
    if pop[0] <= 0:
        raise DomainError(f"population of direction {j0} is zero at t=0")
    below = np.flatnonzero(pop < pop[0] * 10.0 ** (-decades))
    end = int(below[0]) if below.size else pop.size
    if end < 3:
        raise NumericError("fewer than 3 samples before the population decayed; reduce dt or store_every")
    tt, yy = t[:end], np.log(pop[:end])
    slope, intercept = np.polyfit(tt, yy, 1)
    resid = yy - (slope * tt + intercept)
    ss_tot = float(np.sum((yy - yy.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    if np.any(np.diff(pop[:end]) > 1e-12 * pop[0]):
        warnings.warn(
            f"population of direction {j0} is not monotone over the fit window (R^2 = {r2:.6f})",
            FitQualityWarning,
            stacklevel=2,
        )
    rate = -float(slope)
    return 0.0 if abs(rate) < 1e-300 else rate
