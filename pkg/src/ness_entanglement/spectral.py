"""Frequency-domain kernels: retarded response matrix and bath noise spectrum.

The response of the coupled pair to a force at frequency kappa is

    D(kappa) = (-kappa^2 I + W - 2 i gamma kappa I)^-1,   W = [[w^2, s], [s, w^2]].

Its entries share the denominator P(kappa) = P+(kappa) P-(kappa) with
P±(kappa) = (kappa^2 - w±^2)^2 + 4 gamma^2 kappa^2.
"""
from __future__ import annotations

import math

import numpy as np

from .model import SystemParams

ELEMENTS = ((1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (4, 4))

# order of the independent components returned by folded_integrands
FOLDED = ((1, 1), (3, 3), (1, 3), (1, 4), (2, 2), (4, 4), (2, 4))


def d2_tilde(kappa, p: SystemParams) -> np.ndarray:
    """Response matrix, shape ``kappa.shape + (2, 2)``."""
    k = np.asarray(kappa, dtype=float)
    a = p.omega**2 - k**2 - 2j * p.gamma * k
    det = a * a - p.sigma**2
    out = np.empty(k.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a / det
    out[..., 1, 1] = a / det
    out[..., 0, 1] = -p.sigma / det
    out[..., 1, 0] = -p.sigma / det
    return out


def hadamard_spectrum(kappa, beta: float):
    """Symmetrized bath spectrum (|k|/4pi) coth(beta |k| / 2).

    Uses coth(x/2) = 1 + 2/expm1(x) so the classical limit 1/(2 pi beta) is
    reached without cancellation.
    """
    k = np.abs(np.asarray(kappa, dtype=float))
    if math.isinf(beta):
        return k / (4 * np.pi)
    x = beta * k
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = np.where(x > 0, x / np.expm1(x), 1.0)
    return (k + 2.0 * ratio / beta) / (4 * np.pi)


def denominators(kappa, p: SystemParams):
    k2 = np.asarray(kappa, dtype=float) ** 2
    g = 4 * p.gamma**2 * k2
    pp = (k2 - p.omega**2 - p.sigma) ** 2 + g
    pm = (k2 - p.omega**2 + p.sigma) ** 2 + g
    return pp, pm


def kernels(kappa, p: SystemParams):
    """Return (|D11|^2, |D12|^2, Re D11* D21, kappa^2 / P).

    Each is written as a product of single-Lorentzian factors so nothing
    overflows for kappa up to ~1e30.
    """
    k = np.asarray(kappa, dtype=float)
    k2 = k**2
    pp, pm = denominators(k, p)
    inv = (1.0 / pp) * (1.0 / pm)
    num11 = (k2 - p.omega**2) ** 2 + 4 * p.gamma**2 * k2
    abs11 = (num11 / pp) / pm
    abs12 = p.sigma**2 * inv
    cross = p.sigma * (k2 - p.omega**2) * inv
    kk = k2 * inv
    return abs11, abs12, cross, kk


def element_integrand(element, kappa, p: SystemParams):
    """Integrand f with V_ij = integral of f over the whole real line (no cutoff).

    Prefactors are included, with e^2 = 8 pi m gamma. ``element`` is a
    1-based index pair over (x1, p1, x2, p2).
    """
    i, j = sorted(element)
    k = np.asarray(kappa, dtype=float)
    g1 = hadamard_spectrum(k, p.beta1)
    g2 = hadamard_spectrum(k, p.beta2)
    a, b, c, kk = kernels(k, p)
    m, gam, s = p.m, p.gamma, p.sigma
    # e^2/m^2 / (2 pi) = 4 gamma / m ; e^2 / (2 pi) = 4 m gamma
    pos = 4 * gam / m
    mom = 4 * m * gam
    if (i, j) == (1, 1):
        return pos * (a * g1 + b * g2)
    if (i, j) == (3, 3):
        return pos * (b * g1 + a * g2)
    if (i, j) == (1, 3):
        return pos * c * (g1 + g2)
    if (i, j) == (2, 2):
        return mom * k**2 * (a * g1 + b * g2)
    if (i, j) == (4, 4):
        return mom * k**2 * (b * g1 + a * g2)
    if (i, j) == (2, 4):
        return mom * k**2 * c * (g1 + g2)
    if (i, j) == (1, 4):
        return -8 * s * gam**2 * kk * (g1 - g2)
    if (i, j) == (2, 3):
        return 8 * s * gam**2 * kk * (g1 - g2)
    # <{x_i, p_i}>/2 reduces to an odd integrand
    if (i, j) == (1, 2):
        return 4 * gam * k * (a * g1 + b * g2)
    if (i, j) == (3, 4):
        return 4 * gam * k * (b * g1 + a * g2)
    raise ValueError(f"not an element of the 4x4 covariance matrix: {element}")


def folded_integrands(kappa, p: SystemParams) -> np.ndarray:
    """The seven independent integrands folded onto kappa >= 0.

    Rows follow FOLDED; each is twice the corresponding element_integrand.
    """
    k = np.asarray(kappa, dtype=float)
    g1 = hadamard_spectrum(k, p.beta1)
    g2 = hadamard_spectrum(k, p.beta2)
    a, b, c, kk = kernels(k, p)
    pos = 8 * p.gamma / p.m
    mom = 8 * p.m * p.gamma * k**2
    s1 = a * g1 + b * g2
    s3 = b * g1 + a * g2
    cs = c * (g1 + g2)
    return np.stack([
        pos * s1,
        pos * s3,
        pos * cs,
        -16 * p.sigma * p.gamma**2 * kk * (g1 - g2),
        mom * s1,
        mom * s3,
        mom * cs,
    ])
