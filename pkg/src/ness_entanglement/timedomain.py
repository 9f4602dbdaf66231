"""Finite-time covariance from the time-domain solution of the Langevin equations.

This route never touches the spectral integrals used by the steady-state
quadrature: the noise term is a double time integral of the response kernels
against the bath correlation function on a uniform trapezoidal mesh.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.linalg import matmul_toeplitz

from .covariance import CovarianceMatrix
from .errors import GridTooCoarse
from .model import SystemParams, mode_frequencies, validate

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _vacuum_kernel(tau, cutoff):
    # int_0^L k cos(k tau) dk = L^2 [sin x / x - (1 - cos x) / x^2],  x = L tau
    x = cutoff * np.abs(tau)
    small = x < 1e-3
    xs = np.where(small, 1.0, x)
    big = np.sin(xs) / xs - 2 * np.sin(xs / 2) ** 2 / xs**2
    series = 0.5 - x**2 / 8 + x**4 / 144
    return cutoff**2 * np.where(small, series, big)


def hadamard_kernel_time(lags, beta: float, cutoff: float, chunk: int = 512) -> np.ndarray:
    """Bath correlation G_H(tau) = (1/4pi^2) int_0^cutoff k coth(beta k/2) cos(k tau) dk."""
    lags = np.abs(np.asarray(lags, dtype=float))
    out = _vacuum_kernel(lags, cutoff)
    if not math.isinf(beta):
        top = min(cutoff, 60.0 / beta)
        # panels narrow enough to resolve cos(k tau) at the longest lag
        width = min(top, math.pi / max(lags.max(initial=0.0), 1e-300), 2.0 / beta)
        npan = max(1, math.ceil(top / width))
        edges = np.linspace(0.0, top, npan + 1)
        h = 0.5 * np.diff(edges)
        k = ((edges[:-1] + edges[1:]) / 2)[:, None] + h[:, None] * _GL_X[None, :]
        w = (h[:, None] * _GL_W[None, :]).ravel()
        k = k.ravel()
        x = beta * k
        thermal = w * 2 * k / np.expm1(x)
        for s in range(0, lags.size, chunk):
            sl = slice(s, s + chunk)
            out[sl] += np.cos(np.outer(lags[sl], k)) @ thermal
    return out / (4 * math.pi**2)


def mode_kernels(u, p: SystemParams):
    """Normal-mode response functions and their derivatives at times u >= 0.

    Returns dict with keys d_plus, d_minus (displacement response to an impulse),
    dd_plus, dd_minus (their time derivatives), c_plus, c_minus (response to an
    initial displacement) and dc_plus, dc_minus.
    """
    mf = mode_frequencies(p)
    g = p.gamma
    u = np.asarray(u, dtype=float)
    e = np.exp(-g * u)
    out = {}
    for tag, W, w2 in (("plus", mf.Omega_plus, mf.omega_plus_sq), ("minus", mf.Omega_minus, mf.omega_minus_sq)):
        s, c = np.sin(W * u), np.cos(W * u)
        out["d_" + tag] = e * s / W
        out["dd_" + tag] = e * (c - g / W * s)
        out["c_" + tag] = e * (c + g / W * s)
        out["dc_" + tag] = -w2 / W * e * s
    return out


def _coupled(kp, km):
    """2x2 oscillator-basis matrix from normal-mode functions (broadcast over time)."""
    s, d = 0.5 * (kp + km), 0.5 * (kp - km)
    return np.array([[s, d], [d, s]])


def transfer_matrix(p: SystemParams, t: float) -> np.ndarray:
    """Map from (x1, p1, x2, p2) at time 0 to time t, without noise."""
    k = mode_kernels(np.array(t), p)
    D1 = _coupled(k["c_plus"], k["c_minus"])
    D2 = _coupled(k["d_plus"], k["d_minus"])
    dD1 = _coupled(k["dc_plus"], k["dc_minus"])
    dD2 = _coupled(k["dd_plus"], k["dd_minus"])
    m = p.m
    M = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            M[2 * i, 2 * j] = D1[i, j]
            M[2 * i, 2 * j + 1] = D2[i, j] / m
            M[2 * i + 1, 2 * j] = m * dD1[i, j]
            M[2 * i + 1, 2 * j + 1] = dD2[i, j]
    return M


def initial_covariance(width: float) -> np.ndarray:
    """Separable minimum-uncertainty packets with <x^2> = width^2."""
    return np.diag([width**2, 1 / (4 * width**2), width**2, 1 / (4 * width**2)])


def _noise_part(p: SystemParams, t: float, n: int) -> np.ndarray:
    u = np.linspace(0.0, t, n)
    h = u[1] - u[0]
    w = np.full(n, h)
    w[0] = w[-1] = h / 2
    k = mode_kernels(u, p)
    D2 = _coupled(k["d_plus"], k["d_minus"])
    dD2 = _coupled(k["dd_plus"], k["dd_minus"])
    e2 = 8 * math.pi * p.m * p.gamma
    V = np.zeros((4, 4))
    for bath, beta in ((0, p.beta1), (1, p.beta2)):
        G = hadamard_kernel_time(u, beta, p.lambda_cutoff)
        # responses of x1, p1, x2, p2 to the force of this bath
        R = np.stack([D2[0, bath] / p.m, dD2[0, bath], D2[1, bath] / p.m, dD2[1, bath]], axis=1)
        WR = R * w[:, None]
        V += e2 * WR.T @ matmul_toeplitz(G, WR)
    return 0.5 * (V + V.T)


def time_domain_oracle(p: SystemParams, t: float, n_grid: int | None = None, width: float = 0.3,
                       tol: float = 1e-3) -> CovarianceMatrix:
    """Covariance at time t starting from separable Gaussian packets of the given width.

    The noise integral is evaluated with n_grid and 2*n_grid - 1 points; if the
    two differ by more than 10*tol (relative to the largest element) the grid is
    rejected. The finer result is returned.
    """
    validate(p, closed_form=True)
    if p.gamma <= 0:
        raise ValueError("time-domain oracle needs gamma > 0")
    if t < 0:
        raise ValueError("t must be non-negative")
    V0 = initial_covariance(width)
    M = transfer_matrix(p, t)
    hom = M @ V0 @ M.T
    if t == 0:
        return CovarianceMatrix(hom)
    if n_grid is None:
        n_grid = max(512, math.ceil(8 * t * p.lambda_cutoff / math.pi))
    coarse = _noise_part(p, t, n_grid)
    fine = _noise_part(p, t, 2 * n_grid - 1)
    V = hom + fine
    shift = np.max(np.abs(fine - coarse)) / np.max(np.abs(V))
    if shift > 10 * tol:
        raise GridTooCoarse(f"doubling the grid moved the result by {shift:.3g} (relative)")
    return CovarianceMatrix(V)
