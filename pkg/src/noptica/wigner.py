"""Wigner function of a one-dimensional momentum-basis density matrix.

For momenta p_k = p_min + k dq the transform

    f(x, P_m) = (1 / (pi hbar)) sum_{k + l = m} exp(i x (p_k - p_l) / hbar) rho_kl

lives on the half-spaced grid P_m = p_min + m dq/2, m = 0 .. 2N-2, so every
anti-diagonal of rho lands on a grid row without interpolation. With this
normalisation sum f dx dp = 1 over one spatial period 2 pi hbar / dq, the
even rows carry the populations (sum_x f(x, P_2k) dx dp = rho_kk) and the odd
rows carry interference only.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import CONSTANTS
from .errors import DomainError, GridError

__all__ = ["MomentumState1D", "WignerField", "wigner_transform", "period", "max_threads"]


def max_threads() -> int:
    """Thread cap from ``NOPTICA_THREADS`` (default: CPU count)."""
    env = os.environ.get("NOPTICA_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"NOPTICA_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


@dataclass(frozen=True)
class MomentumState1D:
    """Density matrix over the uniform momentum grid p_min + k dq (kg m/s)."""

    rho: np.ndarray
    p_min: float
    dq: float

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DomainError("rho must be a square matrix")
        if not self.dq > 0:
            raise GridError(f"momentum spacing must be > 0, got {self.dq!r}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(rho))):
            raise DomainError("rho must be Hermitian")
        object.__setattr__(self, "rho", rho)

    @property
    def momenta(self) -> np.ndarray:
        return self.p_min + self.dq * np.arange(self.rho.shape[0])

    @classmethod
    def from_amplitudes(cls, psi, p_min: float, dq: float) -> "MomentumState1D":
        """Pure state from (unnormalised) momentum amplitudes."""
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), p_min, dq)


@dataclass(frozen=True)
class WignerField:
    """Samples ``values[i, j] = f(x[i], p[j])`` in (m kg m/s)^-1."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0]) if self.x.size > 1 else 0.0

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    def x_marginal(self) -> np.ndarray:
        """Position density sum_p f dp."""
        return self.values.sum(axis=1) * self.dp

    def p_marginal(self) -> np.ndarray:
        """Probability per momentum row, sum_x f dx dp."""
        return self.values.sum(axis=0) * self.dx * self.dp

    def total(self) -> float:
        return float(self.values.sum() * self.dx * self.dp)


def period(dq: float, hbar: float = CONSTANTS.hbar) -> float:
    """Spatial period 2 pi hbar / dq of the transform on a momentum grid with spacing dq."""
    return 2.0 * math.pi * hbar / dq


def wigner_transform(state: MomentumState1D, x, hbar: float = CONSTANTS.hbar, threads=None) -> WignerField:
    """Wigner function of ``state`` on the uniform position grid ``x`` (m).

    Raises
    ------
    GridError
        If ``x`` is not uniform or spans more than one period 2 pi hbar / dq.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise GridError("x must be a non-empty 1-D array")
    if x.size > 1:
        dx = np.diff(x)
        if np.any(dx <= 0) or np.max(np.abs(dx - dx[0])) > 1e-9 * abs(dx[0]):
            raise GridError("x grid must be uniform and increasing")
        span = x.size * dx[0]
        if span > period(state.dq, hbar) * (1.0 + 1e-12):
            raise GridError(
                f"x span {span:.6g} m exceeds the alias-free period {period(state.dq, hbar):.6g} m"
            )
    rho = state.rho
    n = rho.shape[0]
    # reversed columns turn anti-diagonals into diagonals: flip[k, n-1-l] = rho[k, l]
    flip = rho[:, ::-1]
    offsets = range(n - 1, -n, -1)  # m = k + l runs 0 .. 2n-2
    antidiag = []
    for m, off in enumerate(offsets):
        vals = np.diagonal(flip, offset=off)
        k0 = max(0, m - (n - 1))
        k = k0 + np.arange(vals.size)
        antidiag.append((2 * k - m, vals))  # p_k - p_l = (2k - m) dq

    scale = state.dq / hbar

    def chunk(xs):
        out = np.empty((xs.size, 2 * n - 1), dtype=complex)
        for m, (diffs, vals) in enumerate(antidiag):
            out[:, m] = np.exp(1j * scale * np.outer(xs, diffs)) @ vals
        return out

    workers = max_threads() if threads is None else max(1, int(threads))
    pieces = np.array_split(x, min(workers, x.size))
    if len(pieces) == 1:
        raw = chunk(x)
    else:
        with ThreadPoolExecutor(max_workers=len(pieces)) as pool:
            raw = np.concatenate(list(pool.map(chunk, pieces)), axis=0)
    raw /= math.pi * hbar
    scale_ref = max(float(np.max(np.abs(raw.real))), 1e-300)
    if np.max(np.abs(raw.imag)) > 1e-12 * scale_ref:
        raise DomainError("Wigner function is not real; input is not Hermitian")
    p = state.p_min + 0.5 * state.dq * np.arange(2 * n - 1)
    return WignerField(x, p, raw.real.copy())
