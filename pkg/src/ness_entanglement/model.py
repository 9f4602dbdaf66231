"""Parameter set for two coupled oscillators with private baths.

Units are hbar = k_B = 1. An inverse temperature of ``math.inf`` means the bath
is at zero temperature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace, asdict
from typing import Mapping

from .errors import CutoffTooLow, NonPositive, Overdamped, UnstableCoupling, ValidationError

FIELDS = ("m", "omega", "sigma", "gamma", "lambda_cutoff", "beta1", "beta2")

# short names accepted on the command line and in JSON configs
ALIASES = {"lambda": "lambda_cutoff", "cutoff": "lambda_cutoff", "Lambda": "lambda_cutoff"}


@dataclass(frozen=True)
class SystemParams:
    omega: float
    sigma: float
    gamma: float
    lambda_cutoff: float
    beta1: float = math.inf
    beta2: float = math.inf
    m: float = 1.0

    @property
    def equal_temperatures(self) -> bool:
        return self.beta1 == self.beta2

    def with_(self, **changes) -> "SystemParams":
        if "beta" in changes:
            b = changes.pop("beta")
            changes["beta1"] = b
            changes["beta2"] = b
        changes = {ALIASES.get(k, k): v for k, v in changes.items()}
        return replace(self, **changes)

    def swapped(self) -> "SystemParams":
        """Same system with the two baths exchanged."""
        return replace(self, beta1=self.beta2, beta2=self.beta1)

    def to_dict(self) -> dict:
        return {k: _json_float(v) for k, v in asdict(self).items()}

    @classmethod
    def from_mapping(cls, data: Mapping) -> "SystemParams":
        d = {}
        for k, v in data.items():
            key = ALIASES.get(k, k)
            if key == "beta":
                d["beta1"] = d["beta2"] = parse_float(v)
            elif key in FIELDS:
                d[key] = parse_float(v)
            else:
                raise ValidationError(f"unknown parameter {k!r}")
        missing = [f for f in ("omega", "sigma", "gamma", "lambda_cutoff") if f not in d]
        if missing:
            raise ValidationError(f"missing parameters: {', '.join(missing)}")
        return cls(**d)


def parse_float(v) -> float:
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf", "infinity", "∞"):
            return math.inf
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ValidationError(f"not a number: {v!r}") from None


def _json_float(v):
    return "inf" if v == math.inf else v


@dataclass(frozen=True)
class ModeFrequencies:
    omega_plus_sq: float
    omega_minus_sq: float
    Omega_plus_sq: float
    Omega_minus_sq: float

    @property
    def omega_plus(self) -> float:
        return math.sqrt(self.omega_plus_sq)

    @property
    def omega_minus(self) -> float:
        return math.sqrt(self.omega_minus_sq)

    @property
    def Omega_plus(self) -> float:
        return math.sqrt(self.Omega_plus_sq)

    @property
    def Omega_minus(self) -> float:
        return math.sqrt(self.Omega_minus_sq)

    @property
    def underdamped(self) -> bool:
        return self.Omega_minus_sq > 0 and self.Omega_plus_sq > 0


def mode_frequencies(p: SystemParams) -> ModeFrequencies:
    wp2 = p.omega**2 + p.sigma
    wm2 = p.omega**2 - p.sigma
    g2 = p.gamma**2
    return ModeFrequencies(wp2, wm2, wp2 - g2, wm2 - g2)


def validate(p: SystemParams, closed_form: bool = False) -> SystemParams:
    """Check a parameter set and return it unchanged.

    With ``closed_form=True`` the slow mode must also be underdamped, which
    every analytic regime expression assumes.
    """
    for name in FIELDS:
        v = getattr(p, name)
        if not isinstance(v, (int, float)) or math.isnan(v):
            raise ValidationError(f"{name} must be a real number, got {v!r}")
    for name in ("m", "omega", "beta1", "beta2"):
        if getattr(p, name) <= 0:
            raise NonPositive(f"{name} must be positive, got {getattr(p, name)}")
    for name in ("m", "omega", "sigma", "gamma", "lambda_cutoff"):
        if math.isinf(getattr(p, name)):
            raise ValidationError(f"{name} must be finite")
    if p.gamma < 0:
        raise NonPositive(f"gamma must be non-negative, got {p.gamma}")
    if p.sigma < 0:
        raise UnstableCoupling(f"sigma must be non-negative, got {p.sigma}")
    if p.sigma >= p.omega**2:
        raise UnstableCoupling(f"sigma={p.sigma} must be below omega^2={p.omega**2}")
    if p.lambda_cutoff <= p.omega:
        raise CutoffTooLow(f"cutoff {p.lambda_cutoff} must exceed omega={p.omega}")
    if closed_form and mode_frequencies(p).Omega_minus_sq <= 0:
        raise Overdamped(
            f"slow mode overdamped: omega^2 - sigma - gamma^2 = {mode_frequencies(p).Omega_minus_sq:.6g}"
        )
    return p
