"""Independent reference computations used by the tests.

Nothing here calls into the code paths it checks.
"""

import math

import numpy as np
from scipy import integrate


def dense_liouvillian(jumps, h_diag):
    """Column-stacked superoperator of the master equation built from explicit L_ij."""
    n = jumps.size
    hbar = jumps.hbar
    eye = np.eye(n)
    H = np.diag(np.asarray(h_diag, dtype=complex))
    Ls = [jumps.operator(i, j) for i in range(n) for j in range(n) if jumps.rates[i, j] > 0]
    Gam = 0.5 * sum((L.conj().T @ L for L in Ls), np.zeros((n, n), complex))
    # vec(A X B) = (B^T kron A) vec(X) for column stacking
    sup = -1j / hbar * (np.kron(eye, H) - np.kron(H.T, eye))
    sup -= (np.kron(eye, Gam) + np.kron(Gam.T, eye)) / hbar
    for L in Ls:
        sup += np.kron(L.conj(), L) / hbar
    return sup


def vec(m):
    return np.asarray(m).reshape(-1, order="F")


def unvec(v, n):
    return np.asarray(v).reshape(n, n, order="F")


def hard_sphere_s_by_3d_radial(q, a, n_o):
    """1 + n_o int d^3r e^{iqr}[g-1] for the step g, done as a plain radial quadrature of sin(qr)/(qr)."""
    if a == 0:
        return 1.0
    if q == 0:
        inner = a**3 / 3.0
    else:
        inner, _ = integrate.quad(lambda r: r * math.sin(q * r) / q, 0.0, a, epsabs=0, epsrel=1e-12, limit=200)
    return 1.0 - 4.0 * math.pi * n_o * inner


def solid_angle_integral_in_q(beam, model):
    """int dOmega S_c = (2 pi / k^2) int_0^{2k} q S(q) dq, an integral in q rather than theta."""
    k = beam.wavenumber
    val, _ = integrate.quad(lambda q: q * float(model(np.array([q]))[0]), 0.0, 2 * k, epsabs=0, epsrel=1e-13, limit=500)
    return 2.0 * math.pi * val / k**2


def gaussian_position_density(x, x0, sigma_x, period, images=5):
    """Periodised normal density of width sigma_x centred at x0."""
    x = np.asarray(x)
    total = sum(np.exp(-((x - x0 - j * period) ** 2) / (2 * sigma_x**2)) for j in range(-images, images + 1))
    return total / math.sqrt(2 * math.pi * sigma_x**2)
