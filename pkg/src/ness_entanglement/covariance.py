"""Steady-state covariance matrix of the coupled pair.

Ordering of the phase-space vector is (x1, p1, x2, p2). Four routes are
provided: adaptive quadrature of the late-time spectral integrals (the
reference), and closed forms valid at high, zero and low temperature.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import spectral
from .errors import CutoffTooLow, RegimeWarning
from .model import SystemParams, mode_frequencies, validate
from .quadrature import integrate

# beyond this frequency the momentum integrands are replaced by their 1/kappa tail
_KAPPA_MAX = 1e30


@dataclass(frozen=True)
class CovarianceMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        v = np.array(self.matrix, dtype=float) + 0.0  # no negative zeros in output
        if v.shape != (4, 4):
            raise ValueError("covariance matrix must be 4x4")
        v.setflags(write=False)
        object.__setattr__(self, "matrix", v)

    @classmethod
    def from_elements(cls, v11, v22, v33, v44, v13=0.0, v14=0.0, v24=0.0, v12=0.0, v34=0.0, v23=None):
        if v23 is None:
            v23 = -v14
        m = np.array([
            [v11, v12, v13, v14],
            [v12, v22, v23, v24],
            [v13, v23, v33, v34],
            [v14, v24, v34, v44],
        ], dtype=float)
        return cls(m)

    def __getitem__(self, ij):
        """1-based element access, e.g. V[1, 3]."""
        i, j = ij
        return float(self.matrix[i - 1, j - 1])

    @property
    def A(self) -> np.ndarray:
        return self.matrix[:2, :2]

    @property
    def B(self) -> np.ndarray:
        return self.matrix[2:, 2:]

    @property
    def C(self) -> np.ndarray:
        return self.matrix[:2, 2:]

    def swap_oscillators(self) -> "CovarianceMatrix":
        perm = [2, 3, 0, 1]
        return CovarianceMatrix(self.matrix[np.ix_(perm, perm)])

    def elements(self) -> dict:
        return {f"V{i}{j}": self[i, j] for i, j in spectral.ELEMENTS}

    def to_dict(self) -> dict:
        return {"matrix": [float(x) for x in self.matrix.ravel()]}


@dataclass(frozen=True)
class QuadratureOptions:
    rtol: float = 1e-9
    atol: float = 1e-14
    breakpoints: tuple | None = None
    max_panels: int = 20000

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("tolerances must be positive")


def default_breakpoints(p: SystemParams) -> list[float]:
    mf = mode_frequencies(p)
    pts = [mf.omega_plus, mf.omega_minus]
    for sq in (mf.Omega_plus_sq, mf.Omega_minus_sq):
        if sq > 0:
            pts.append(math.sqrt(sq))
    for b in (p.beta1, p.beta2):
        if not math.isinf(b):
            pts.append(1.0 / b)
    return [x for x in pts if 0 < x < p.lambda_cutoff]


def _edges(p: SystemParams, q: QuadratureOptions):
    pts = list(q.breakpoints) if q.breakpoints is not None else default_breakpoints(p)
    if any(not (0 < x < p.lambda_cutoff) for x in pts):
        raise ValueError("breakpoints must lie strictly inside (0, cutoff)")
    mf = mode_frequencies(p)
    # resolve the Lorentzian peaks on their own scale gamma
    width = max(p.gamma, 1e-12)
    for sq in (mf.omega_plus_sq, mf.omega_minus_sq):
        c = math.sqrt(sq)
        for k in (1, 4, 16, 64):
            pts += [c - k * width, c + k * width]
    split = min(p.lambda_cutoff, 20 * max(mf.omega_plus, p.gamma))
    top = min(p.lambda_cutoff, _KAPPA_MAX)
    lin = [0.0, split] + [x for x in pts if 0 < x < split]
    log = [x for x in pts if split < x < top]
    return lin, split, log, top


def spectral_integral(f, p: SystemParams, q: QuadratureOptions, tail=None) -> np.ndarray:
    """Integrate a vector integrand f(kappa) over [0, cutoff].

    Up to a few times the highest mode frequency the variable is kappa itself;
    above that it is log(kappa). Past 1e30 the integrand is replaced by
    ``tail / kappa`` (``tail`` is a per-component coefficient array).
    """
    lin, split, log, top = _edges(p, q)
    total = integrate(f, lin, q.rtol, q.atol, q.max_panels).value
    if top > split:
        def g(u):
            k = np.exp(u)
            return f(k) * k
        edges = [math.log(split), math.log(top)] + [math.log(x) for x in log]
        total = total + integrate(g, edges, q.rtol, q.atol, q.max_panels).value
    if p.lambda_cutoff > top and tail is not None:
        total = total + np.asarray(tail) * math.log(p.lambda_cutoff / top)
    return total


def steady_state_numeric(p: SystemParams, q: QuadratureOptions | None = None) -> CovarianceMatrix:
    """Late-time covariance by quadrature of the spectral integrals on [0, cutoff]."""
    validate(p)
    q = q or QuadratureOptions()
    log_slope = 2 * p.m * p.gamma / math.pi
    tail = [0, 0, 0, 0, log_slope, log_slope, 0]
    v11, v33, v13, v14, v22, v44, v24 = spectral_integral(lambda k: spectral.folded_integrands(k, p), p, q, tail)
    if p.beta1 == p.beta2:
        v14 = 0.0
    return CovarianceMatrix.from_elements(v11, v22, v33, v44, v13, v14, v24)


def _inv(b: float) -> float:
    return 0.0 if math.isinf(b) else 1.0 / b


def high_temperature(p: SystemParams, cutoff_term: bool = True) -> CovarianceMatrix:
    """Leading high-temperature forms.

    The momentum variances carry (m gamma/pi) sum_j ln(beta_j cutoff) from the
    vacuum tail between the thermal scale and the cutoff; ``cutoff_term=False``
    drops it (useful only to show how large it is).
    """
    validate(p, closed_form=True)
    w2, s, g, m, L = p.omega**2, p.sigma, p.gamma, p.m, p.lambda_cutoff
    t1, t2 = _inv(p.beta1), _inv(p.beta2)
    for b in (p.beta1, p.beta2):
        if b * L < 1:
            raise CutoffTooLow(f"high-temperature forms need cutoff above 1/beta = {1 / b:.6g}")
        if b * p.omega >= 0.3:
            warnings.warn(f"beta*omega = {b * p.omega:.3g} is not small", RegimeWarning, stacklevel=2)
    w4 = w2 * w2
    d1 = w4 - s * s
    d2 = 4 * w2 * g * g + s * s
    x_own = (8 * w4 * g * g + w2 * s * s - 4 * g * g * s * s) / (d1 * d2)
    x_other = s * s * (w2 + 4 * g * g) / (d1 * d2)
    v11 = (x_own * t1 + x_other * t2) / (2 * m)
    v33 = (x_own * t2 + x_other * t1) / (2 * m)
    v13 = -s / (2 * m * d1) * (t1 + t2)
    v14 = -g * s / d2 * (t1 - t2)
    log_term = m * g / math.pi * sum(math.log(b * L) for b in (p.beta1, p.beta2) if b * L > 1)
    if not cutoff_term:
        log_term = 0.0
    p_own = (8 * w2 * g * g + s * s) / d2
    p_other = s * s / d2
    v22 = log_term + m / 2 * (p_own * t1 + p_other * t2)
    v44 = log_term + m / 2 * (p_own * t2 + p_other * t1)
    v24 = m * s / 24 * (p.beta1 + p.beta2)
    return CovarianceMatrix.from_elements(v11, v22, v33, v44, v13, v14, v24)


def f_resonance(z, gamma):
    """1 + (2/pi) arctan((z^2 - gamma^2) / (2 gamma z)).

    This is 1 + (2/pi) arccot(2 gamma z / (z^2 - gamma^2)) with the branch that
    stays continuous through z = gamma; it tends to 2 as gamma -> 0.
    """
    z = np.asarray(z, dtype=float)
    return 1 + 2 / np.pi * np.arctan2(z * z - gamma * gamma, 2 * gamma * z)


def zero_temperature(p: SystemParams) -> CovarianceMatrix:
    """Vacuum covariance, asymptotic in cutoff >> omega."""
    validate(p, closed_form=True)
    mf = mode_frequencies(p)
    g, m = p.gamma, p.m
    Wp, Wm = mf.Omega_plus, mf.Omega_minus
    fp, fm = float(f_resonance(Wp, g)), float(f_resonance(Wm, g))
    xp, xm = fp / Wp, fm / Wm
    v11 = (xp + xm) / (8 * m)
    v13 = (xp - xm) / (8 * m)
    kp = (Wp * Wp - g * g) * xp
    km = (Wm * Wm - g * g) * xm
    v22 = m * g / math.pi * math.log(p.lambda_cutoff**2 / (mf.omega_plus * mf.omega_minus)) + m / 8 * (kp + km)
    v24 = -m * g / math.pi * math.log(mf.omega_plus / mf.omega_minus) + m / 8 * (kp - km)
    return CovarianceMatrix.from_elements(v11, v22, v11, v22, v13, 0.0, v24)


def low_temperature(p: SystemParams) -> CovarianceMatrix:
    """Vacuum forms plus the leading power-law thermal corrections."""
    v0 = zero_temperature(p).matrix
    w2, s, g, m = p.omega**2, p.sigma, p.gamma, p.m
    t1, t2 = _inv(p.beta1), _inv(p.beta2)
    for b in (p.beta1, p.beta2):
        if math.isinf(b):
            continue
        bw = b * p.omega
        if (g / p.omega) / bw**2 > 0.1 or (g / p.omega) / bw**4 > 0.1:
            warnings.warn(f"low-temperature corrections not small at beta*omega = {bw:.3g}", RegimeWarning, stacklevel=2)
    w4 = w2 * w2
    d = (w4 - s * s) ** 2
    c2 = 2 * math.pi * g / (3 * m) / d
    c4 = 4 * math.pi**3 / 15 / d
    dv = np.zeros((4, 4))
    dv[0, 0] = c2 * (w4 * t1**2 + s * s * t2**2)
    dv[2, 2] = c2 * (w4 * t2**2 + s * s * t1**2)
    dv[0, 2] = dv[2, 0] = -c2 * w2 * s * (t1**2 + t2**2)
    d14 = -2 * c4 * g * g * s * (t1**4 - t2**4)
    dv[0, 3] = dv[3, 0] = d14
    dv[1, 2] = dv[2, 1] = -d14
    dv[1, 1] = c4 * m * g * (w4 * t1**4 + s * s * t2**4)
    dv[3, 3] = c4 * m * g * (w4 * t2**4 + s * s * t1**4)
    dv[1, 3] = dv[3, 1] = -c4 * m * w2 * g * s * (t1**4 + t2**4)
    return CovarianceMatrix(v0 + dv)


@dataclass(frozen=True)
class EnergyReport:
    kinetic1: float
    spring1: float
    kinetic2: float
    spring2: float
    interaction: float

    @property
    def total(self) -> float:
        return self.kinetic1 + self.spring1 + self.kinetic2 + self.spring2 + self.interaction

    def as_tuple(self):
        return (self.kinetic1, self.spring1, self.kinetic2, self.spring2, self.interaction, self.total)


def energy_report(V: CovarianceMatrix, p: SystemParams) -> EnergyReport:
    m, w2 = p.m, p.omega**2
    return EnergyReport(
        kinetic1=V[2, 2] / (2 * m),
        spring1=m * w2 * V[1, 1] / 2,
        kinetic2=V[4, 4] / (2 * m),
        spring2=m * w2 * V[3, 3] / 2,
        interaction=m * p.sigma * V[1, 3],
    )
