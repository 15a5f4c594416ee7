import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusgrf.meyer import (
    DEFAULT_MEYER,
    meyer_scaling_hat,
    meyer_wavelet_hat,
    smoothing_nu,
    tensor_wavelet_hat,
    wavelet_types,
)

TWO_THIRDS_PI = 2 * math.pi / 3


def test_smoothing_nu_values():
    assert smoothing_nu(0.5) == pytest.approx(0.5, rel=1e-14)
    assert smoothing_nu(-1.0) == 0.0
    assert smoothing_nu(2.0) == 1.0
    # theta(1/4) / (theta(1/4) + theta(3/4)) = 1 / (1 + e^{8/3})
    assert smoothing_nu(0.25) == pytest.approx(0.06496916912866407, rel=1e-12)


@given(x=st.floats(-2.0, 3.0))
@settings(max_examples=300, deadline=None)
def test_smoothing_nu_partition_of_unity(x):
    assert smoothing_nu(x) + smoothing_nu(1.0 - x) == pytest.approx(1.0, abs=1e-14)


def test_scaling_profile_values():
    assert meyer_scaling_hat(0.0) == 1.0
    assert meyer_scaling_hat(4 * math.pi / 3) == 0.0
    assert meyer_scaling_hat(math.pi) == pytest.approx(math.sqrt(2) / 2, rel=1e-12)
    assert meyer_scaling_hat(-math.pi) == meyer_scaling_hat(math.pi)
    w = np.linspace(-20, 20, 4001)
    vals = meyer_scaling_hat(w)
    assert np.all(vals[np.abs(w) > 4 * math.pi / 3] == 0.0)
    assert np.all((vals >= 0) & (vals <= 1))


def test_wavelet_profile_values():
    assert abs(meyer_wavelet_hat(math.pi)) == pytest.approx(math.sqrt(2) / 2, rel=1e-12)
    assert meyer_wavelet_hat(math.pi / 2) == 0.0
    # outside the support +-[2pi/3, 8pi/3]
    assert meyer_wavelet_hat(3 * math.pi) == 0.0
    assert meyer_wavelet_hat(0.0) == 0.0
    # second branch at 5pi/3: modulus cos(pi/2 * nu(1/4))
    expect = math.cos(math.pi / 2 * smoothing_nu(0.25))
    assert abs(meyer_wavelet_hat(5 * math.pi / 3)) == pytest.approx(expect, rel=1e-12)
    assert abs(meyer_wavelet_hat(5 * math.pi / 3)) == pytest.approx(0.9947970766965986, rel=1e-12)


def test_wavelet_phase_factor():
    for w in (0.8 * math.pi, 1.7 * math.pi, -2.2 * math.pi):
        val = meyer_wavelet_hat(w)
        assert val == pytest.approx(abs(val) * cmath.exp(0.5j * w), rel=1e-12)
    # conjugate symmetry (real mother wavelet)
    for w in (0.9 * math.pi, 2.5 * math.pi):
        assert meyer_wavelet_hat(-w) == pytest.approx(meyer_wavelet_hat(w).conjugate(), rel=1e-12)


def test_partition_identity():
    w = np.linspace(-4 * math.pi / 3, 4 * math.pi / 3, 10001)
    total = meyer_scaling_hat(w) ** 2 + np.abs(meyer_wavelet_hat(w)) ** 2
    assert np.abs(total - 1.0).max() <= 1e-12


def test_telescoping_identity():
    L = 3
    w = np.linspace(TWO_THIRDS_PI, 2**L * 4 * math.pi / 3, 20001)
    total = meyer_scaling_hat(w) ** 2
    for level in range(L + 1):
        total = total + np.abs(meyer_wavelet_hat(w / 2**level)) ** 2
    assert np.abs(total - 1.0).max() <= 1e-12


def test_scaling_smoothness_proxy():
    # order-6 centered differences stay bounded across the branch joints
    for joint in (TWO_THIRDS_PI, 4 * math.pi / 3):
        prev = None
        for h in (0.1, 0.05, 0.025):
            offs = np.arange(7)
            coef = np.array([math.comb(6, k) * (-1) ** k for k in offs])
            x = joint + (offs - 3.0) * h
            diff = abs(np.dot(coef, meyer_scaling_hat(x))) / h**6
            if prev is not None:
                assert diff <= 4.0 * max(prev, 1.0)
            prev = diff


def test_tensor_types():
    assert wavelet_types(1) == [(1,)]
    assert set(wavelet_types(2)) == {(0, 1), (1, 0), (1, 1)}


def test_tensor_wavelet_hat():
    assert tensor_wavelet_hat(DEFAULT_MEYER, (1,), math.pi) == pytest.approx(
        meyer_wavelet_hat(math.pi), rel=1e-14
    )
    val = tensor_wavelet_hat(DEFAULT_MEYER, (1, 0), np.array([math.pi, 0.0]))
    assert val == pytest.approx(meyer_wavelet_hat(math.pi) * 1.0, rel=1e-14)
    with pytest.raises(ValueError):
        tensor_wavelet_hat(DEFAULT_MEYER, (0, 0), np.array([1.0, 1.0]))
