"""Separability tests and entanglement measures for a two-mode Gaussian state."""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass

import numpy as np

from .covariance import CovarianceMatrix
from .errors import InconsistentEigenvalues, NonPositive

J = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = np.block([[J, np.zeros((2, 2))], [np.zeros((2, 2)), J]])
# partial transpose flips the sign of the second momentum
FLIP = np.diag([1.0, 1.0, 1.0, -1.0])

# separability threshold for hbar = 1
THRESHOLD = 0.5
EIGEN_TOL = 1e-10


@dataclass(frozen=True)
class SymplecticPair:
    eta_less: float
    eta_greater: float


@dataclass(frozen=True)
class EntanglementReport:
    zeta_plus: float
    zeta_minus: float
    det_C: float
    pair: SymplecticPair
    negativity: float
    log_negativity: float

    @property
    def entangled(self) -> bool:
        return self.pair.eta_less < THRESHOLD

    def to_dict(self) -> dict:
        return {
            "zeta_plus": self.zeta_plus,
            "zeta_minus": self.zeta_minus,
            "det_C": self.det_C,
            "eta_less": self.pair.eta_less,
            "eta_greater": self.pair.eta_greater,
            "negativity": self.negativity,
            "log_negativity": self.log_negativity,
            "entangled": self.entangled,
        }


def _matrix(V) -> np.ndarray:
    return V.matrix if isinstance(V, CovarianceMatrix) else np.asarray(V, dtype=float)


def phs_criteria(V) -> tuple[float, float, float]:
    """Return (zeta_plus, zeta_minus, det C); zeta_plus < 0 signals entanglement."""
    v = _matrix(V)
    A, B, C = v[:2, :2], v[2:, 2:], v[:2, 2:]
    dA, dB, dC = np.linalg.det(A), np.linalg.det(B), np.linalg.det(C)
    tr = np.trace(A @ J @ C @ J @ B @ J @ C.T @ J)
    base = dA * dB - tr - (dA + dB) / 4
    zp = base + (dC + 0.25) ** 2
    zm = base + (dC - 0.25) ** 2
    return float(zp), float(zm), float(dC)


def _det_exact(rows) -> Fraction:
    """Determinant by fraction-exact elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


def _closed_form(v):
    # the invariants are polynomials in the entries; evaluating them exactly keeps
    # the discriminant accurate when the two eigenvalues nearly coincide
    q = [[Fraction(float(x)) for x in row] for row in v]
    dA = _det_exact([r[:2] for r in q[:2]])
    dB = _det_exact([r[2:] for r in q[2:]])
    dC = _det_exact([r[2:] for r in q[:2]])
    det_v = _det_exact(q)
    delta = dA + dB - 2 * dC
    disc = max(float(delta * delta / 4 - det_v), 0.0)
    big2 = float(delta) / 2 + math.sqrt(disc)
    small2 = float(det_v) / big2 if big2 > 0 else 0.0
    return math.sqrt(max(small2, 0.0)), math.sqrt(big2)


def _eigen_route(v):
    """Eigenvalues of i Omega V^pt, via the similar Hermitian matrix S (i Omega) S with S = sqrt(V^pt)."""
    w, u = np.linalg.eigh(FLIP @ v @ FLIP)
    if not w[0] > 0:
        raise NonPositive(f"covariance matrix is not positive definite (smallest eigenvalue {w[0]:.3g})")
    s = (u * np.sqrt(w)) @ u.T
    return np.linalg.eigvalsh(s @ (1j * OMEGA) @ s)


def symplectic_eigenvalues(V) -> SymplecticPair:
    """Symplectic eigenvalues of the partially transposed covariance matrix.

    Computed twice, from determinants and from a direct eigen-decomposition;
    the routes must agree to 1e-10 relative to the larger eigenvalue.
    """
    v = _matrix(V)
    less, greater = _closed_form(v)
    ev = _eigen_route(v)
    scale = max(1.0, greater)
    pos = ev[2:]
    if np.max(np.abs(ev[:2] + pos[::-1])) > EIGEN_TOL * scale:
        raise InconsistentEigenvalues(f"eigenvalues not in +/- pairs: {ev}")
    if abs(pos[0] - less) > EIGEN_TOL * scale or abs(pos[1] - greater) > EIGEN_TOL * scale:
        raise InconsistentEigenvalues(
            f"closed form ({less:.15g}, {greater:.15g}) vs eigen route ({pos[0]:.15g}, {pos[1]:.15g})"
        )
    return SymplecticPair(less, greater)


def symmetric_eigenvalues(V) -> SymplecticPair:
    """Shortcut valid when the two baths share a temperature (V14 = 0, A = B)."""
    v = _matrix(V)
    a = (v[0, 0] + v[0, 2]) * (v[1, 1] - v[1, 3])
    b = (v[0, 0] - v[0, 2]) * (v[1, 1] + v[1, 3])
    lo, hi = sorted((math.sqrt(a), math.sqrt(b)))
    return SymplecticPair(lo, hi)


def negativity(pair: SymplecticPair) -> tuple[float, float]:
    e = pair.eta_less
    return max(0.0, (1 - 2 * e) / (2 * e)), max(0.0, -math.log(2 * e))


def report(V) -> EntanglementReport:
    zp, zm, dc = phs_criteria(V)
    pair = symplectic_eigenvalues(V)
    n, en = negativity(pair)
    return EntanglementReport(zp, zm, dc, pair, n, en)


def eta_less(V) -> float:
    return symplectic_eigenvalues(V).eta_less
