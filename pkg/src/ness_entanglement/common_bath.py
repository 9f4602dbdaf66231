"""Two oscillators sharing one bath.

Only the centre-of-mass mode x+ = (x1 + x2)/2 couples to the field; the
relative mode x- = x1 - x2 oscillates freely and keeps its initial condition
forever. Covariances are split into an intrinsic part (free evolution of the
initial packets) and an induced part (bath noise).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .covariance import CovarianceMatrix
from .entanglement import THRESHOLD, symplectic_eigenvalues
from .errors import GridTooCoarse, ValidationError
from .model import SystemParams, mode_frequencies, validate
from .timedomain import hadamard_kernel_time


@dataclass(frozen=True)
class CommonBathState:
    t: float
    intrinsic: CovarianceMatrix
    induced: CovarianceMatrix

    @property
    def covariance(self) -> CovarianceMatrix:
        return CovarianceMatrix(self.intrinsic.matrix + self.induced.matrix)


def _check(p: SystemParams):
    validate(p)
    if p.beta1 != p.beta2:
        raise ValidationError("a common bath has a single temperature: beta1 must equal beta2")
    if p.gamma <= 0:
        raise ValidationError("common-bath evolution needs gamma > 0")
    if mode_frequencies(p).Omega_plus_sq <= 0:
        raise ValidationError("fast mode must be underdamped")


def fast_kernels(t, p: SystemParams):
    """(d1, d2, d1', d2') for the damped centre-of-mass mode."""
    mf = mode_frequencies(p)
    W, g = mf.Omega_plus, p.gamma
    t = np.asarray(t, dtype=float)
    e, s, c = np.exp(-g * t), np.sin(W * t), np.cos(W * t)
    return e * (c + g / W * s), e * s / W, -mf.omega_plus_sq / W * e * s, e * (c - g / W * s)


def slow_kernels(t, p: SystemParams):
    """(d1, d2, d1', d2') for the undamped relative mode."""
    W = mode_frequencies(p).omega_minus
    t = np.asarray(t, dtype=float)
    s, c = np.sin(W * t), np.cos(W * t)
    return c, s / W, -W * s, c


def _mode_moments(kern, x0, v0):
    """<x^2>, <v^2>, sym <x v> for x(t) = d1 x0 + d2 v0 with uncorrelated x0, v0."""
    d1, d2, dd1, dd2 = kern
    return d1 * d1 * x0 + d2 * d2 * v0, dd1 * dd1 * x0 + dd2 * dd2 * v0, d1 * dd1 * x0 + d2 * dd2 * v0


def _assemble(xp, xm, pp, pm, cp, cm):
    """Oscillator-basis matrices (..., 4, 4) from mode moments (momenta already scaled by m)."""
    v = np.zeros(np.shape(xp) + (4, 4))
    v11, v13 = xp + xm / 4, xp - xm / 4
    v22, v24 = pp + pm / 4, pp - pm / 4
    v12, v14 = cp + cm / 4, cp - cm / 4
    for (i, j), val in {(0, 0): v11, (2, 2): v11, (0, 2): v13, (1, 1): v22, (3, 3): v22, (1, 3): v24,
                        (0, 1): v12, (2, 3): v12, (0, 3): v14, (1, 2): v14}.items():
        v[..., i, j] = val
        v[..., j, i] = val
    return v


def intrinsic_series(p: SystemParams, times, width: float) -> np.ndarray:
    """Initial-condition part of V(t); returns shape (len(times), 4, 4)."""
    m = p.m
    # x+ = (x1+x2)/2 and x- = x1 - x2 for independent packets of width^2 and 1/(4 width^2)
    fx, fv, fc = _mode_moments(fast_kernels(times, p), width**2 / 2, 1 / (8 * width**2 * m * m))
    sx, sv, sc = _mode_moments(slow_kernels(times, p), 2 * width**2, 1 / (2 * width**2 * m * m))
    return _assemble(fx, sx, m * m * fv, m * m * sv, m * fc, m * sc)


def _induced_on_grid(p: SystemParams, T: float, n: int):
    """Noise-driven moments of x+ at every point of a uniform grid on [0, T].

    With a(u), b(u) the fast-mode response functions, the double integral
    I_ab(t) = int_0^t int_0^t a(u) b(u') G(u - u') du du' obeys
    dI_ab/dt = a(t) h_b(t) + b(t) h_a(t),  h_b(t) = int_0^t b(u') G(t - u') du',
    so one causal convolution per kernel gives the whole time series.
    """
    u = np.linspace(0.0, T, n)
    h = u[1] - u[0]
    G = hadamard_kernel_time(u, p.beta1, p.lambda_cutoff)
    _, d2, _, dd2 = fast_kernels(u, p)

    def conv(b):
        full = fftconvolve(b, G)[:n]
        return h * (full - 0.5 * b[0] * G - 0.5 * b * G[0])

    hx, hv = conv(d2), conv(dd2)

    def cumulate(rate):
        out = np.zeros(n)
        out[1:] = np.cumsum(0.5 * h * (rate[1:] + rate[:-1]))
        return out

    e2, m = 8 * math.pi * p.m * p.gamma, p.m
    ixx = e2 / m**2 * cumulate(2 * d2 * hx)
    ipp = e2 * cumulate(2 * dd2 * hv)
    ixp = e2 / m * cumulate(d2 * hv + dd2 * hx)
    return u, ixx, ipp, ixp


def induced_series(p: SystemParams, T: float, n_grid: int | None = None, tol: float = 1e-3):
    """Induced moments on a uniform grid, checked against a grid with half the spacing.

    Returns (u, ixx, ipp, ixp) on the coarse grid.
    """
    if n_grid is None:
        n_grid = max(1024, math.ceil(8 * T * p.lambda_cutoff / math.pi))
    coarse = _induced_on_grid(p, T, n_grid)
    fine = _induced_on_grid(p, T, 2 * n_grid - 1)
    scale = max(np.max(np.abs(c)) for c in coarse[1:3])
    shift = max(np.max(np.abs(c - f[::2])) for c, f in zip(coarse[1:], fine[1:]))
    if shift > 10 * tol * scale:
        raise GridTooCoarse(f"halving the time step moved induced moments by {shift / scale:.3g} (relative)")
    return fine[0][::2], fine[1][::2], fine[2][::2], fine[3][::2]


def common_bath_series(p: SystemParams, T: float, width: float, n_grid: int | None = None, tol: float = 1e-3):
    """Covariance split on a uniform grid of [0, T]: (times, intrinsic, induced)."""
    _check(p)
    if T <= 0:
        t = np.zeros(1)
        return t, intrinsic_series(p, t, width), np.zeros((1, 4, 4))
    u, ixx, ipp, ixp = induced_series(p, T, n_grid, tol)
    zero = np.zeros_like(u)
    induced = _assemble(ixx, zero, ipp, zero, ixp, zero)
    return u, intrinsic_series(p, u, width), induced


def common_bath_covariance(p: SystemParams, t: float, width: float, n_grid: int | None = None,
                           tol: float = 1e-3) -> CommonBathState:
    if t < 0:
        raise ValueError("t must be non-negative")
    u, intr, ind = common_bath_series(p, t, width, n_grid, tol)
    return CommonBathState(float(u[-1]), CovarianceMatrix(intr[-1]), CovarianceMatrix(ind[-1]))


@dataclass(frozen=True)
class SDRScan:
    times: np.ndarray
    eta_less: np.ndarray
    intervals: list          # (t_start, t_end, entangled) covering the scanned range

    @property
    def entangled_intervals(self) -> list:
        return [(a, b) for a, b, e in self.intervals if e]

    @property
    def sdr(self) -> bool:
        return len(self.entangled_intervals) >= 2


def sdr_scan(p: SystemParams, t_range, width: float, n_grid: int | None = None, tol: float = 1e-3,
             stride: int | None = None) -> SDRScan:
    """Entanglement history eta_<(t) and its maximal entangled/separable intervals."""
    t0, t1 = map(float, t_range)
    if t1 <= t0:
        return SDRScan(np.zeros(0), np.zeros(0), [])
    u, intr, ind = common_bath_series(p, t1, width, n_grid, tol)
    if stride is None:
        stride = max(1, u.size // 4000)
    sel = np.nonzero(u >= t0)[0][::stride]
    times = u[sel]
    V = intr[sel] + ind[sel]
    eta = np.array([symplectic_eigenvalues(v).eta_less for v in V])
    # the initial separable packets sit exactly on the boundary
    ent = eta < THRESHOLD - 1e-12
    intervals = []
    start = 0
    for k in range(1, len(times) + 1):
        if k == len(times) or ent[k] != ent[start]:
            intervals.append((float(times[start]), float(times[k - 1]), bool(ent[start])))
            start = k
    return SDRScan(times, eta, intervals)
