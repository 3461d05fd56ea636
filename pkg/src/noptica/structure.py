"""Static structure function S_c(q) of an isotropic medium.

Three ways of producing S_c(q) are provided, all evaluated through
:func:`s_static`:

``HardSphere``
    analytic transform of the step pair-correlation function of a dilute
    hard-sphere gas;
``Tabulated``
    monotone cubic (PCHIP) interpolation of sampled (q, S) pairs;
``PairCorrelation``
    adaptive radial quadrature of 1 + 4 pi n_o int r^2 (g(r) - 1) sinc(qr) dr
    over piecewise-linear samples of g(r).

Wavenumbers ``q`` are momentum transfers divided by hbar, in m^-1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from .core import CONSTANTS
from .errors import DomainError, ExtrapolationError, NumericError

__all__ = [
    "HardSphere",
    "Tabulated",
    "PairCorrelation",
    "StructureModel",
    "pair_correlation_hard_sphere",
    "s_static",
    "s_zero_sum_rule",
    "hard_sphere_samples",
    "SERIES_SWITCH",
]

# Below this value of x the small-argument series replaces the direct formulas.
SERIES_SWITCH = 0.1
_SERIES_TERMS = 8


def _j1_over_x(x):
    """(sin x - x cos x) / x**3, accurate for all x >= 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < SERIES_SWITCH
    xs = x[small]
    x2 = xs * xs
    acc = np.zeros_like(xs)
    # sum_{k>=1} (-1)^(k+1) 2k x^(2k-2) / (2k+1)!, summed from the smallest term up
    for k in range(_SERIES_TERMS, 0, -1):
        coef = (-1) ** (k + 1) * 2 * k / math.factorial(2 * k + 1)
        acc = acc * x2 + coef if k < _SERIES_TERMS else np.full_like(xs, coef)
    out[small] = acc
    xl = x[~small]
    out[~small] = (np.sin(xl) - xl * np.cos(xl)) / xl**3
    return out


def _sinc_minus_one(x):
    """sin(x)/x - 1, accurate for all x >= 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < SERIES_SWITCH
    x2 = x[small] ** 2
    acc = np.zeros_like(x2)
    for k in range(_SERIES_TERMS, 0, -1):
        acc = acc * x2 + (-1) ** k / math.factorial(2 * k + 1)
    out[small] = acc * x2
    xl = x[~small]
    out[~small] = np.sin(xl) / xl - 1.0
    return out


def pair_correlation_hard_sphere(r: float, a: float) -> float:
    """Step pair-correlation function of a dilute hard-sphere gas.

    Returns 0 inside the excluded sphere (r < a) and 1 outside; g(a) = 1.
    """
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r!r}")
    if a < 0:
        raise DomainError(f"a must be >= 0, got {a!r}")
    return 0.0 if r < a else 1.0


@dataclass(frozen=True)
class HardSphere:
    """Analytic S_c(q) for hard spheres of diameter ``a`` (m) at density ``n_o`` (m^-3)."""

    a: float
    n_o: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a >= 0):
            raise DomainError(f"hard-sphere diameter must be >= 0, got {self.a!r}")
        if not (math.isfinite(self.n_o) and self.n_o > 0):
            raise DomainError(f"number density must be > 0, got {self.n_o!r}")

    @classmethod
    def from_medium(cls, medium) -> "HardSphere":
        return cls(medium.hard_sphere_diameter, medium.number_density)

    @property
    def s_zero(self) -> float:
        """1 - (4/3) pi a^3 n_o."""
        return 1.0 - 4.0 / 3.0 * math.pi * self.a**3 * self.n_o

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        if self.a == 0.0:
            return np.ones_like(q)
        return 1.0 - 4.0 * math.pi * self.n_o * self.a**3 * _j1_over_x(q * self.a)


class Tabulated:
    """S_c(q) interpolated from strictly increasing samples with PCHIP.

    Queries outside ``[q[0], q[-1]]`` raise :class:`ExtrapolationError`.
    """

    def __init__(self, q, s):
        q = np.asarray(q, dtype=float)
        s = np.asarray(s, dtype=float)
        if q.ndim != 1 or q.shape != s.shape or q.size < 2:
            raise DomainError("tabulated q and S must be 1-D arrays of equal length >= 2")
        if not np.all(np.isfinite(q)) or not np.all(np.isfinite(s)):
            raise DomainError("tabulated q and S must be finite")
        if np.any(np.diff(q) <= 0):
            raise DomainError("tabulated q must be strictly increasing")
        if q[0] < 0:
            raise DomainError("tabulated q must be >= 0")
        if np.any(s < 0):
            raise DomainError("tabulated S must be >= 0")
        self.q = q
        self.s = s
        self._interp = PchipInterpolator(q, s, extrapolate=False)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "Tabulated":
        """Read a two-column CSV ``q_in_inverse_meters,S`` with one header line."""
        q, s = _read_two_columns(path)
        return cls(q, s)

    @classmethod
    def from_model(cls, model, q) -> "Tabulated":
        q = np.asarray(q, dtype=float)
        return cls(q, s_static(model, q))

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        # tolerate round-off at the table edges
        span = self.q[-1] - self.q[0]
        lo, hi = self.q[0] - 1e-12 * span, self.q[-1] + 1e-12 * span
        if np.any((q < lo) | (q > hi)):
            raise ExtrapolationError(
                f"q outside tabulated range [{self.q[0]:.6g}, {self.q[-1]:.6g}] m^-1"
            )
        return self._interp(np.clip(q, self.q[0], self.q[-1]))


class PairCorrelation:
    """S_c(q) from piecewise-linear samples of g(r).

    ``r`` must be non-decreasing; a repeated radius encodes a jump of g (the
    hard-sphere contact is ``(a, 0), (a, 1)``). g is taken as 1 beyond the last
    sample, so only the sampled support contributes.
    """

    def __init__(self, r, g, n_o: float, epsrel: float = 1e-12):
        r = np.asarray(r, dtype=float)
        g = np.asarray(g, dtype=float)
        if r.ndim != 1 or r.shape != g.shape or r.size < 2:
            raise DomainError("r and g must be 1-D arrays of equal length >= 2")
        if not np.all(np.isfinite(r)) or not np.all(np.isfinite(g)):
            raise DomainError("r and g must be finite")
        if r[0] < 0 or np.any(np.diff(r) < 0):
            raise DomainError("r must be non-negative and non-decreasing")
        if not (n_o > 0):
            raise DomainError(f"number density must be > 0, got {n_o!r}")
        self.r = r
        self.g = g
        self.n_o = float(n_o)
        self.epsrel = epsrel
        # segments on which g - 1 is not identically zero
        keep = (np.diff(r) > 0) & ((g[:-1] != 1.0) | (g[1:] != 1.0))
        self._segments = [
            (r[i], r[i + 1], g[i] - 1.0, g[i + 1] - 1.0) for i in np.flatnonzero(keep)
        ]

    @classmethod
    def from_csv(cls, path: Union[str, Path], n_o: float) -> "PairCorrelation":
        """Read a two-column CSV ``r_in_meters,g`` with one header line."""
        r, g = _read_two_columns(path)
        return cls(r, g, n_o)

    def _integral(self, q: float) -> float:
        total = 0.0
        for r0, r1, h0, h1 in self._segments:
            slope = (h1 - h0) / (r1 - r0)

            def f(r, r0=r0, h0=h0, slope=slope):
                h = h0 + slope * (r - r0)
                qr = q * r
                s = math.sin(qr) / qr if qr != 0.0 else 1.0
                return r * r * h * s

            val, err, *info = integrate.quad(
                f, r0, r1, epsabs=0.0, epsrel=self.epsrel, limit=200, full_output=1
            )
            if len(info) > 1 and info[0]["last"] >= 200:
                raise NumericError(
                    f"radial quadrature did not converge on [{r0:.3g}, {r1:.3g}] m "
                    f"at q={q:.6g} m^-1 (error estimate {err:.3g})"
                )
            total += val
        return total

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        flat = np.array([self._integral(float(v)) for v in q.ravel()])
        return 1.0 + 4.0 * math.pi * self.n_o * flat.reshape(q.shape)


StructureModel = Union[HardSphere, Tabulated, PairCorrelation]


def s_static(model: StructureModel, q):
    """Evaluate S_c(q) for ``model`` at wavenumber(s) ``q`` (m^-1, >= 0).

    Returns a float for scalar input and an array otherwise.
    """
    qa = np.asarray(q, dtype=float)
    if np.any(~np.isfinite(qa)) or np.any(qa < 0):
        raise DomainError("q must be finite and >= 0")
    out = model(qa)
    return float(out) if np.ndim(q) == 0 else out


def s_zero_sum_rule(n_o: float, T: float, chi_T: float, constants=CONSTANTS) -> float:
    """Compressibility sum rule S_c(0) = n_o k_B T chi_T.

    The result also equals the mean-square particle-number fluctuation per
    particle, <(Delta N)^2>/N.
    """
    for name, v in (("n_o", n_o), ("T", T), ("chi_T", chi_T)):
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be positive, got {v!r}")
    return n_o * constants.boltzmann * T * chi_T


def hard_sphere_samples(a: float, r_max: float | None = None, points: int = 2):
    """(r, g) samples reproducing the hard-sphere step exactly for :class:`PairCorrelation`."""
    if a <= 0:
        raise DomainError("hard_sphere_samples needs a > 0")
    r_max = 2.0 * a if r_max is None else r_max
    inner = np.linspace(0.0, a, max(points, 2))
    outer = np.linspace(a, r_max, max(points, 2))
    r = np.concatenate([inner, outer])
    g = np.concatenate([np.zeros_like(inner), np.ones_like(outer)])
    return r, g


def _read_two_columns(path):
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise DomainError(f"{path}: expected a header line and at least one data row")
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise DomainError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        try:
            data.append((float(row[0]), float(row[1])))
        except ValueError as exc:
            raise DomainError(f"{path}:{lineno}: {exc}") from None
    arr = np.array(data, dtype=float)
    return arr[:, 0], arr[:, 1]
