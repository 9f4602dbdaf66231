"""Steady-state entanglement of two coupled oscillators in contact with thermal baths."""
from .model import SystemParams, ModeFrequencies, mode_frequencies, validate
from .covariance import (
    CovarianceMatrix,
    QuadratureOptions,
    energy_report,
    high_temperature,
    low_temperature,
    steady_state_numeric,
    zero_temperature,
)
from .entanglement import EntanglementReport, SymplecticPair, negativity, phs_criteria, report, symplectic_eigenvalues
from .timedomain import time_domain_oracle

__all__ = [
    "SystemParams", "ModeFrequencies", "mode_frequencies", "validate",
    "CovarianceMatrix", "QuadratureOptions", "energy_report", "high_temperature", "low_temperature",
    "steady_state_numeric", "zero_temperature",
    "EntanglementReport", "SymplecticPair", "negativity", "phs_criteria", "report", "symplectic_eigenvalues",
    "time_domain_oracle",
]

__version__ = "0.1.0"
