"""Normal-mode picture of the symmetric (equal-temperature) steady state.

With x+ = (x1 + x2)/2 and x- = x1 - x2 the two modes decouple. Each is a
damped oscillator with frequency w±^2 = w^2 ± sigma, driven by the sum or the
difference of the two bath forces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covariance import CovarianceMatrix, QuadratureOptions, spectral_integral
from .entanglement import symplectic_eigenvalues
from .errors import UnequalTemperatures
from .model import SystemParams, mode_frequencies, validate
from .spectral import denominators, hadamard_spectrum


def d2_modes(kappa, p: SystemParams):
    """Single-mode responses 1/(-k^2 + w±^2 - 2i gamma k), returned as (plus, minus)."""
    k = np.asarray(kappa, dtype=float)
    mf = mode_frequencies(p)
    base = -k**2 - 2j * p.gamma * k
    return 1 / (base + mf.omega_plus_sq), 1 / (base + mf.omega_minus_sq)


@dataclass(frozen=True)
class ModeCovariances:
    xx_plus: float
    xx_minus: float
    pp_plus: float
    pp_minus: float

    def compose(self) -> CovarianceMatrix:
        """Oscillator-basis covariance assembled from the two modes."""
        v11 = self.xx_plus + self.xx_minus / 4
        v13 = self.xx_plus - self.xx_minus / 4
        v22 = self.pp_plus + self.pp_minus / 4
        v24 = self.pp_plus - self.pp_minus / 4
        return CovarianceMatrix.from_elements(v11, v22, v11, v22, v13, 0.0, v24)


def _require_equal(p):
    if p.beta1 != p.beta2:
        raise UnequalTemperatures("mode decomposition needs equal bath temperatures")


def mode_covariances(p: SystemParams, q: QuadratureOptions | None = None) -> ModeCovariances:
    """Variances <x+^2>, <x-^2>, <p+^2>, <p-^2> by quadrature of single-mode spectra."""
    validate(p)
    _require_equal(p)
    q = q or QuadratureOptions()
    g, m = p.gamma, p.m

    def f(k):
        pp, pm = denominators(k, p)
        G = hadamard_spectrum(k, p.beta1)
        # x+ feels (xi1 + xi2)/2, x- feels xi1 - xi2
        ap, am = 4 * g / m * G / pp, 16 * g / m * G / pm
        return np.stack([ap, am, m * m * k * k * ap, m * m * k * k * am])

    tail = [0, 0, m * g / math.pi, 4 * m * g / math.pi]
    xp, xm, pp_, pm_ = spectral_integral(f, p, q, tail)
    return ModeCovariances(xp, xm, pp_, pm_)


def eta_less_mode_identity(p: SystemParams, q: QuadratureOptions | None = None) -> float:
    """Relative residual of eta_<^2 = (1/4)<{x+,x+}><{p-,p-}>.

    The left side comes from the full covariance matrix, the right side from
    the single-mode integrals.
    """
    from .covariance import steady_state_numeric

    _require_equal(p)
    eta = symplectic_eigenvalues(steady_state_numeric(p, q)).eta_less
    mc = mode_covariances(p, q)
    rhs = 0.25 * (2 * mc.xx_plus) * (2 * mc.pp_minus)
    return abs(eta**2 - rhs) / rhs
