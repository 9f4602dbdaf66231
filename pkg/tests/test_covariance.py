import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from ness_entanglement import covariance as cov
from ness_entanglement.errors import CutoffTooLow
from ness_entanglement.model import SystemParams, mode_frequencies
from ness_entanglement.spectral import ELEMENTS, element_integrand

def rel(a, b):
    return abs(a - b) / abs(b)


def test_matrix_is_symmetric_and_read_only():
    V = cov.steady_state_numeric(SystemParams(5, 10, 0.2, 1e4, 1.0, 2.0))
    assert np.array_equal(V.matrix, V.matrix.T)
    with pytest.raises(ValueError):
        V.matrix[0, 0] = 1.0
    assert V[2, 3] == -V[1, 4]
    assert V[1, 2] == V[3, 4] == 0.0


@pytest.mark.parametrize("p", [
    SystemParams(5, 10, 0.2, 60, 1.0, 2.0),
    SystemParams(3, 4, 0.5, 40, 0.3, math.inf),
])
def test_quadrature_matches_scipy_full_line(p):
    """Independent route: scipy.quad over the two-sided integrand."""
    V = cov.steady_state_numeric(p)
    mf = mode_frequencies(p)
    pts = sorted({mf.Omega_plus, mf.Omega_minus, -mf.Omega_plus, -mf.Omega_minus, 0.0})
    for e in ELEMENTS:
        ref, _ = quad(lambda k: element_integrand(e, k, p), -p.lambda_cutoff, p.lambda_cutoff,
                      points=pts, limit=2000, epsabs=1e-13, epsrel=1e-11)
        assert V[e] == pytest.approx(ref, rel=1e-7, abs=1e-11)


def test_equal_temperatures_zero_cross_term():
    V = cov.steady_state_numeric(SystemParams(5, 18, 0.3, 1e4, 0.7, 0.7))
    assert V[1, 4] == 0.0 and V[2, 3] == 0.0


def test_uncoupled_zero_temperature_single_oscillator():
    p = SystemParams(5, 0, 0.2, 1e3)
    V = cov.steady_state_numeric(p)
    Om = math.sqrt(25 - 0.04)
    assert abs(V[1, 3]) < 1e-14
    assert V[1, 1] == pytest.approx(cov.f_resonance(Om, 0.2) / (4 * Om), rel=1e-5)


@pytest.mark.parametrize("sigma", [0.0, 10.0, 24.0])
def test_zero_temperature_closed_form_against_quadrature(sigma):
    p = SystemParams(5, sigma, 0.2, 1e4)
    a, b = cov.steady_state_numeric(p).elements(), cov.zero_temperature(p).elements()
    for k in a:
        assert a[k] == pytest.approx(b[k], rel=1e-6, abs=1e-12)


def test_zero_temperature_weak_damping_limit():
    p = SystemParams(5, 9, 1e-9, 1e4)
    mf = mode_frequencies(p)
    V = cov.zero_temperature(p)
    assert V[2, 2] == pytest.approx((mf.omega_plus + mf.omega_minus) / 4, rel=1e-6)
    assert V[1, 1] == pytest.approx((1 / mf.omega_plus + 1 / mf.omega_minus) / 4, rel=1e-6)


def test_f_resonance_values():
    assert cov.f_resonance(0.2, 0.2) == pytest.approx(1.0)
    assert cov.f_resonance(5.0, 1e-12) == pytest.approx(2.0)
    assert cov.f_resonance(1e-6, 0.3) == pytest.approx(0.0, abs=1e-5)
    z = np.linspace(0.01, 20, 500)
    assert np.all(np.diff(cov.f_resonance(z, 0.4)) > 0)


def test_weak_damping_thermal_state():
    """Gibbs state of the two normal modes when the bath coupling is tiny."""
    beta = 0.5
    p = SystemParams(5, 12, 1e-3, 1e4, beta, beta)
    V = cov.steady_state_numeric(p)
    w = np.array([math.sqrt(37), math.sqrt(13)])
    c = 1 / np.tanh(beta * w / 2)
    assert V[1, 1] == pytest.approx((c[0] / w[0] + c[1] / w[1]) / 4, rel=1e-4)
    assert V[1, 3] == pytest.approx((c[0] / w[0] - c[1] / w[1]) / 4, rel=1e-4)
    # momentum picks up the (m gamma / pi) log cutoff term
    assert V[2, 2] == pytest.approx((w[0] * c[0] + w[1] * c[1]) / 4, rel=3e-3)


def test_cutoff_doubling_slope():
    g = 0.2
    a = cov.steady_state_numeric(SystemParams(5, 10, g, 1e4))
    b = cov.steady_state_numeric(SystemParams(5, 10, g, 2e4))
    assert b[2, 2] - a[2, 2] == pytest.approx(2 * g / math.pi * math.log(2), rel=1e-4)
    assert b[1, 1] == pytest.approx(a[1, 1], rel=1e-6)


def test_position_variance_grows_with_temperature():
    vals = [cov.steady_state_numeric(SystemParams(5, 10, 0.2, 1e4, b, b))[1, 1] for b in np.geomspace(10, 0.01, 12)]
    assert np.all(np.diff(vals) > 0)


def test_bath_swap():
    p = SystemParams(5, 15, 0.3, 1e4, 0.4, 3.0)
    P = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    a = cov.steady_state_numeric(p).matrix
    b = cov.steady_state_numeric(p.swapped()).matrix
    assert np.allclose(a, P @ b @ P.T, rtol=1e-9, atol=1e-12 * np.abs(a).max())


def test_high_temperature_examples():
    beta = 0.002
    p = SystemParams(5, 0, 1e-9, 1e4, beta, beta)
    V = cov.high_temperature(p)
    assert V[2, 2] == pytest.approx(1 / beta, rel=1e-6)
    assert V[1, 1] == pytest.approx(1 / (beta * 25), rel=1e-12)
    assert V[1, 3] == 0.0
    assert cov.energy_report(V, p).interaction == 0.0


def test_high_temperature_energy():
    beta, w, s = 0.002, 5.0, 15.0
    p = SystemParams(w, s, 1e-9, 1e4, beta, beta)
    E = cov.energy_report(cov.high_temperature(p), p)
    assert E.total == pytest.approx(2 / beta, rel=1e-2)
    assert E.spring1 == pytest.approx(w**4 / (w**4 - s * s) / (2 * beta), rel=1e-12)
    assert E.total == pytest.approx(sum(E.as_tuple()[:5]))


def test_high_temperature_against_quadrature():
    p = SystemParams(5, 10, 0.2, 1e4, 0.01, 0.01)
    a, b = cov.steady_state_numeric(p).elements(), cov.high_temperature(p).elements()
    for k in ("V11", "V13", "V22", "V24", "V33", "V44"):
        assert rel(b[k], a[k]) < 0.02


def test_high_temperature_rejects_tiny_cutoff():
    with pytest.raises(CutoffTooLow):
        cov.high_temperature(SystemParams(5, 10, 0.2, 10, 0.01, 0.01))


def test_low_temperature_reduces_to_vacuum():
    p = SystemParams(5, 10, 0.2, 1e4)
    assert np.array_equal(cov.low_temperature(p).matrix, cov.zero_temperature(p).matrix)


def test_low_temperature_cross_term_flips_on_swap():
    p = SystemParams(5, 10, 0.2, 1e4, 4.0, 2.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a, b = cov.low_temperature(p), cov.low_temperature(p.swapped())
    assert a[1, 4] == pytest.approx(-b[1, 4], rel=1e-14)
    assert a[1, 4] != 0


@pytest.mark.parametrize("bw", [10, 20])
def test_low_temperature_against_quadrature(bw):
    p = SystemParams(5, 10, 0.2, 1e4, bw / 5, bw / 5)
    a = cov.steady_state_numeric(p).elements()
    b = cov.low_temperature(p).elements()
    for k in a:
        if a[k] != 0:
            assert rel(b[k], a[k]) < 0.05
