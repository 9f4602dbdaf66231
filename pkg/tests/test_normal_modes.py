import math

import numpy as np
import pytest

from ness_entanglement import normal_modes as nm
from ness_entanglement.covariance import steady_state_numeric, zero_temperature
from ness_entanglement.entanglement import symplectic_eigenvalues
from ness_entanglement.errors import UnequalTemperatures
from ness_entanglement.model import SystemParams


def test_mode_responses_diagonalize_the_pair():
    p = SystemParams(5, 12, 0.3, 1e4)
    k = 3.7
    W = np.array([[25, 12], [12, 25]])
    D = np.linalg.inv(-k * k * np.eye(2) + W - 2j * 0.3 * k * np.eye(2))
    dp, dm = nm.d2_modes(k, p)
    assert D[0, 0] == pytest.approx((dp + dm) / 2, rel=1e-13)
    assert D[0, 1] == pytest.approx((dp - dm) / 2, rel=1e-13)


@pytest.mark.parametrize("p", [
    SystemParams(5, 12, 0.3, 1e4, 1.0, 1.0),
    SystemParams(5, 23, 0.1, 1e4),
    SystemParams(3, 2, 0.5, 200, 0.2, 0.2),
])
def test_superposition_matches_covariance_module(p):
    a = nm.mode_covariances(p).compose().matrix
    b = steady_state_numeric(p).matrix
    assert np.allclose(a, b, rtol=1e-7, atol=1e-10 * np.abs(b).max())


def test_degenerate_modes_when_uncoupled():
    m = nm.mode_covariances(SystemParams(5, 0, 0.2, 1e4, 1.0, 1.0))
    assert m.xx_plus == pytest.approx(m.xx_minus / 4, rel=1e-9)
    pair = symplectic_eigenvalues(m.compose())
    assert pair.eta_less == pytest.approx(pair.eta_greater, rel=1e-9)
    assert nm.eta_less_mode_identity(SystemParams(5, 0, 0.2, 1e4, 1.0, 1.0)) < 1e-8


def test_slow_mode_dominates_near_instability():
    ratios = []
    for g in (0.05, 0.01):
        V = steady_state_numeric(SystemParams(5, 24.9, g, 1e4))
        assert V[1, 3] / V[1, 1] < -0.9
        ratios.append(V[2, 4] / V[2, 2])
    # the cutoff log in V22 has no partner in V24, so the momentum ratio only approaches 1 as gamma shrinks
    assert 0.75 < ratios[0] < ratios[1] < 1


@pytest.mark.parametrize("p", [SystemParams(5, 20, 0.5, 1e4, 1.0, 1.0), SystemParams(5, 24, 0.2, 1e4)])
def test_identity_examples(p):
    assert nm.eta_less_mode_identity(p) <= 1e-8


def test_unequal_temperatures_rejected():
    with pytest.raises(UnequalTemperatures):
        nm.mode_covariances(SystemParams(5, 10, 0.2, 1e4, 1.0, 2.0))
    with pytest.raises(UnequalTemperatures):
        nm.eta_less_mode_identity(SystemParams(5, 10, 0.2, 1e4, 1.0, 2.0))
