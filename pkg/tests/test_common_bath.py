import math

import numpy as np
import pytest

from ness_entanglement import common_bath as cb
from ness_entanglement.errors import GridTooCoarse, ValidationError
from ness_entanglement.model import SystemParams, mode_frequencies
from ness_entanglement.covariance import steady_state_numeric
from ness_entanglement.timedomain import hadamard_kernel_time

SLOW = SystemParams(5, 10, 0.05, 20)
FAST = SystemParams(5, 10, 0.5, 20, 0.2, 0.2)


def test_initial_state():
    s = cb.common_bath_covariance(SLOW, 0.0, 0.3)
    assert np.allclose(s.covariance.matrix, np.diag([0.09, 1 / 0.36, 0.09, 1 / 0.36]))


def test_kernels_initial_conditions():
    for kern in (cb.fast_kernels(0.0, SLOW), cb.slow_kernels(0.0, SLOW)):
        d1, d2, dd1, dd2 = kern
        assert (d1, d2, dd1, dd2) == pytest.approx((1, 0, 0, 1))


def test_symmetric_construction():
    u, intr, ind = cb.common_bath_series(SLOW, 40.0, 0.4)
    V = intr + ind
    assert np.array_equal(V[:, 0, 0], V[:, 2, 2])
    assert np.array_equal(V[:, 1, 1], V[:, 3, 3])


def test_induced_against_direct_double_integral():
    """Brute-force trapezoid double integral of the fast-mode response at one time."""
    p, t = FAST, 3.0
    u, ixx, ipp, ixp = cb.induced_series(p, t, n_grid=1201)
    n = 1201
    s = np.linspace(0, t, n)
    w = np.full(n, s[1] - s[0])
    w[[0, -1]] /= 2
    _, d2, _, _ = cb.fast_kernels(t - s, p)
    lags = np.abs(s[:, None] - s[None, :])
    G = hadamard_kernel_time(lags.ravel(), p.beta1, p.lambda_cutoff).reshape(n, n)
    e2 = 8 * math.pi * p.m * p.gamma
    ref = e2 * (w * d2) @ G @ (w * d2)
    assert ixx[-1] == pytest.approx(ref, rel=2e-3)


def test_late_time_cross_moments_decay():
    T = 12 / FAST.gamma
    s = cb.common_bath_covariance(FAST, T, 0.3)
    scale = abs(s.covariance[1, 1])
    for e in ((1, 2), (3, 4), (1, 4), (2, 3)):
        assert abs(s.induced[e]) < 1e-3 * scale


def test_slow_mode_envelope_constant():
    W = mode_frequencies(SLOW).omega_minus
    t = 10 / SLOW.gamma + np.linspace(0, 2 * math.pi / W, 400)
    intr = cb.intrinsic_series(SLOW, t, 0.3)
    # remove the decayed fast-mode contribution by comparing V11 - V13 = <x-^2>/2
    xm = intr[:, 0, 0] - intr[:, 0, 2]
    a, b = 2 * 0.3**2, 1 / (2 * 0.3**2)
    env = np.cos(W * t) ** 2 * a + (np.sin(W * t) / W) ** 2 * b
    assert np.allclose(xm, env / 2, rtol=1e-12)
    # <x-^2> oscillates at 2W between fixed bounds
    lo, hi = min(a, b / W**2), max(a, b / W**2)
    assert xm.min() >= lo / 2 * (1 - 1e-6) and xm.max() <= hi / 2 * (1 + 1e-6)
    assert (xm.max() - xm.min()) == pytest.approx((hi - lo) / 2, rel=1e-4)


def test_sdr_slow_mode_dominant():
    r = cb.sdr_scan(SLOW, (0, 20 / SLOW.gamma), 0.3)
    assert r.sdr and len(r.entangled_intervals) >= 2


def test_no_sdr_fast_mode_dominant():
    r = cb.sdr_scan(FAST, (0, 20 / FAST.gamma), 0.3)
    assert len(r.entangled_intervals) <= 1 and not r.sdr


def test_empty_range():
    assert cb.sdr_scan(SLOW, (5.0, 5.0), 0.3).intervals == []


def test_rejections():
    with pytest.raises(ValidationError):
        cb.common_bath_covariance(SLOW.with_(beta1=1.0, beta2=2.0), 1.0, 0.3)
    with pytest.raises(ValidationError):
        cb.common_bath_covariance(SLOW.with_(gamma=0.0), 1.0, 0.3)
    with pytest.raises(GridTooCoarse):
        cb.induced_series(FAST, 20.0, n_grid=16, tol=1e-6)


def test_fast_mode_relaxes_to_single_oscillator_steady_state():
    """x+ = (x1 + x2)/2 is a damped oscillator of mass m and frequency omega_+ driven by the shared noise."""
    p = FAST
    s = cb.common_bath_covariance(p, 24 / p.gamma, 0.3)
    ref = steady_state_numeric(SystemParams(mode_frequencies(p).omega_plus, 0, p.gamma, p.lambda_cutoff,
                                            p.beta1, p.beta1))
    assert s.induced[1, 1] == pytest.approx(ref[1, 1], rel=1e-5)
    assert s.induced[2, 2] == pytest.approx(ref[2, 2], rel=2e-3)
    assert s.induced[1, 3] == s.induced[1, 1]
