"""Critical coupling, temperature and cutoff where the state becomes separable.

Every numeric search bisects on eta_< - 1/2, which is monotone in each of the
scanned parameters; the asymptotic formulas are evaluated alongside for
comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Callable

from . import covariance as cov
from .entanglement import THRESHOLD, phs_criteria, symplectic_eigenvalues
from .errors import BracketFailure, NoRoot, NotEntangledAtZeroT
from .model import SystemParams, mode_frequencies, validate

RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class CriticalResult:
    kind: str
    value: float
    bracket: tuple
    iterations: int
    residual: float
    asymptotic: float | None = None

    @property
    def discrepancy(self) -> float | None:
        if self.asymptotic is None:
            return None
        return (self.value - self.asymptotic) / self.asymptotic

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bracket"] = list(self.bracket)
        d["discrepancy"] = self.discrepancy
        return d


def eta_less(p: SystemParams, q: cov.QuadratureOptions | None = None) -> float:
    return symplectic_eigenvalues(cov.steady_state_numeric(p, q)).eta_less


def bisect(g: Callable[[float], float], lo: float, hi: float, tol: float = RESIDUAL_TOL, max_iter: int = 200):
    """Bisection for a sign change of g on [lo, hi].

    Returns (root, iterations, residual, final bracket). Stops once
    |g(mid)| <= tol; the bracket always straddles the sign change.
    """
    glo, ghi = g(lo), g(hi)
    if not (math.isfinite(glo) and math.isfinite(ghi)):
        raise BracketFailure(f"non-finite value at the bracket ends: g = {glo}, {ghi}")
    if glo == 0:
        return lo, 0, 0.0, (lo, hi)
    if ghi == 0:
        return hi, 0, 0.0, (lo, hi)
    if (glo > 0) == (ghi > 0):
        raise NoRoot(f"no sign change on [{lo:.6g}, {hi:.6g}]: g = {glo:.3g}, {ghi:.3g}")
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        gm = g(mid)
        if not math.isfinite(gm):
            raise BracketFailure(f"non-finite value at {mid!r}")
        if abs(gm) <= tol:
            return mid, it, abs(gm), (lo, hi)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    raise BracketFailure(f"residual above {tol} after bisection collapsed to [{lo!r}, {hi!r}]")


def sigma_c_asymptotic(omega: float, gamma: float, cutoff: float) -> float:
    """Weak-coupling zero-temperature critical coupling.

    Series inversion of gamma(sigma) from critical_gamma_relation at beta = inf.
    """
    L = math.log(cutoff / omega) - 1
    return L * (4 * omega * gamma / math.pi + 16 * gamma**2 / math.pi**2)


def critical_sigma(p: SystemParams, q: cov.QuadratureOptions | None = None, tol: float = RESIDUAL_TOL) -> CriticalResult:
    """Coupling above which the pair is entangled, at the (equal) temperature of p."""
    if p.beta1 != p.beta2:
        raise ValueError("critical_sigma needs equal bath temperatures")
    if p.gamma <= 0:
        raise NoRoot("with gamma = 0 every nonzero coupling entangles: sigma_c = 0")
    hi = (p.omega**2 - p.gamma**2) * (1 - 1e-6)
    lo = 0.0
    g = lambda s: eta_less(p.with_(sigma=s), q) - THRESHOLD
    root, it, res, br = bisect(g, lo, hi, tol)
    asym = sigma_c_asymptotic(p.omega, p.gamma, p.lambda_cutoff) if math.isinf(p.beta1) else None
    return CriticalResult("sigma", root, br, it, res, asym)


def critical_sigma_lowT_shift(p: SystemParams, beta: float, sigma0: float | None = None):
    """First-order thermal shift of the critical coupling.

    Returns (sigma_c1, sigma0 + gamma * sigma_c1); sigma0 defaults to the numeric
    zero-temperature root.
    """
    if sigma0 is None:
        sigma0 = critical_sigma(p.with_(beta=math.inf)).value
    w2 = p.omega**2
    if math.isinf(beta):
        s1 = 0.0
    else:
        s1 = 4 * math.pi * (w2 - sigma0) / (3 * beta**2 * w2 * math.sqrt(w2 + sigma0))
    return s1, sigma0 + p.gamma * s1


def beta_c_high_temperature(omega: float, sigma: float, gamma: float, cutoff: float) -> float:
    """High-temperature critical inverse temperature with its leading damping correction."""
    a = 3 * omega**2 + 4 * sigma
    return 2 * math.sqrt(3) / math.sqrt(a) + 6 * gamma / (math.pi * a) * math.log(12 * cutoff**2 / a)


def beta_c_quick_estimate(omega: float, sigma: float) -> float:
    """beta_c ~ (2/omega) / (1 + 4 sigma / 3 omega^2), first order in sigma/omega^2."""
    return 2 / omega / (1 + 4 * sigma / (3 * omega**2))


def eta_less_high_temperature(p: SystemParams) -> float:
    """Equal-temperature eta_< from the high-temperature covariance, to first order in gamma."""
    b, s = p.beta1, p.sigma
    r = 12 - b * b * s
    lead = math.sqrt(r / (b * b * (p.omega**2 + s))) / (2 * math.sqrt(3))
    corr = p.gamma * math.log(b * b * p.lambda_cutoff**2) / (math.pi * r) * math.sqrt(3 * r / (p.omega**2 + s))
    return lead + corr


def _beta_search(p, g, tol):
    lo, hi = math.log(1e-4 / p.omega), math.log(1e4 / p.omega)
    if g(math.inf) >= 0:
        raise NoRoot("separable already at zero temperature")
    return bisect(lambda u: g(math.exp(u)), lo, hi, tol)


def critical_beta(p: SystemParams, q: cov.QuadratureOptions | None = None, tol: float = RESIDUAL_TOL) -> CriticalResult:
    """Inverse temperature below which (hotter) the pair is separable; equal baths."""
    g = lambda b: eta_less(p.with_(beta=b), q) - THRESHOLD
    u, it, res, br = _beta_search(p, g, tol)
    asym = beta_c_high_temperature(p.omega, p.sigma, p.gamma, p.lambda_cutoff)
    return CriticalResult("beta", math.exp(u), (math.exp(br[0]), math.exp(br[1])), it, res, asym)


def critical_beta_zeta(p: SystemParams, q: cov.QuadratureOptions | None = None, tol: float = 1e-12) -> float:
    """Sign change of zeta_+ in beta; used only to cross-check critical_beta."""
    g = lambda b: phs_criteria(cov.steady_state_numeric(p.with_(beta=b), q))[0]
    u, *_ = _beta_search(p, g, tol)
    return math.exp(u)


def critical_beta_lowT(p: SystemParams) -> float:
    """Low-temperature estimate of beta_c from the vacuum eta_< and its thermal correction."""
    validate(p, closed_form=True)
    eta0 = symplectic_eigenvalues(cov.zero_temperature(p)).eta_less
    if eta0 >= THRESHOLD:
        raise NotEntangledAtZeroT(f"vacuum eta_< = {eta0:.6g} >= 1/2")
    W = mode_frequencies(p).Omega_plus
    f = float(cov.f_resonance(W, p.gamma))
    return (math.sqrt(8 * math.pi / 3) * math.sqrt(p.gamma * W * eta0)
            / (math.sqrt((1 - 2 * eta0) * f) * (W * W + p.gamma**2)))


def critical_cutoff(p: SystemParams, bracket=(None, 1e300), q: cov.QuadratureOptions | None = None,
                    tol: float = RESIDUAL_TOL) -> CriticalResult:
    """Cutoff above which the pair becomes separable, searched in log(cutoff)."""
    lo = bracket[0] if bracket[0] is not None else p.omega * (1 + 1e-6)
    hi = bracket[1]
    g = lambda u: eta_less(p.with_(lambda_cutoff=math.exp(u)), q) - THRESHOLD
    if g(math.log(lo)) >= 0:
        raise NoRoot(f"not entangled at the low end of the bracket, cutoff = {lo:.6g}")
    u, it, res, br = bisect(g, math.log(lo), math.log(hi), tol)
    return CriticalResult("cutoff", math.exp(u), (math.exp(br[0]), math.exp(br[1])), it, res)


def critical_gamma_relation(sigma: float, omega: float, cutoff: float, beta: float = math.inf) -> float:
    """Critical damping for given coupling: zero-temperature part plus the 1/beta^2 correction."""
    lnr = math.log(cutoff / omega)
    L = lnr - 1
    zero = math.pi * sigma / (4 * omega * L) - math.pi * sigma**2 / (4 * omega**3 * L**2)
    if math.isinf(beta):
        return zero
    return zero + thermal_bracket(sigma, omega, cutoff) / beta**2


def thermal_bracket(sigma: float, omega: float, cutoff: float) -> float:
    """Coefficient of 1/beta^2 in critical_gamma_relation."""
    lnr = math.log(cutoff / omega)
    L = lnr - 1
    return (-math.pi**3 * sigma / (12 * omega**3 * L**2)
            + math.pi**3 * sigma**2 * lnr / (6 * omega**5 * L**3))
