import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusgrf.cutoff import DomainSpec, bump_theta, cutoff_phi, cutoff_phi_nd, truncated_cov
from torusgrf.kernel import MaternKernel


def test_domain_spec():
    spec = DomainSpec(delta=1.0, gamma=1.5)
    assert spec.kappa == 2.0
    with pytest.raises(ValueError):
        DomainSpec(delta=1.0, gamma=1.0)
    with pytest.raises(ValueError):
        DomainSpec(delta=0.0, gamma=1.0)


def test_bump_theta_values():
    assert bump_theta(1.0) == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert bump_theta(0.0) == 0.0
    assert bump_theta(-5.0) == 0.0
    out = bump_theta(np.array([-1.0, 0.0, 0.5, 2.0]))
    assert np.allclose(out, [0.0, 0.0, math.exp(-2.0), math.exp(-0.5)])


def test_cutoff_phi_values():
    spec = DomainSpec(delta=1.0, gamma=1.5)  # kappa = 2
    assert cutoff_phi(spec, 0.5) == 1.0
    assert cutoff_phi(spec, 2.5) == 0.0
    assert cutoff_phi(spec, 1.5) == pytest.approx(0.5, rel=1e-14)
    assert cutoff_phi(spec, -1.5) == cutoff_phi(spec, 1.5)


@given(x=st.floats(-10.0, 10.0))
@settings(max_examples=300, deadline=None)
def test_cutoff_phi_range_and_evenness(x):
    spec = DomainSpec(delta=1.0, gamma=1.5)
    v = cutoff_phi(spec, x)
    assert 0.0 <= v <= 1.0
    assert cutoff_phi(spec, -x) == v


def test_cutoff_phi_monotone():
    spec = DomainSpec(delta=0.7, gamma=1.2)
    a = np.linspace(0.0, spec.kappa + 0.5, 2000)
    v = cutoff_phi(spec, a)
    assert np.all(np.diff(v) <= 1e-15)


def test_cutoff_phi_smoothness_proxy():
    # centered differences up to order 4 stay bounded near the joints
    spec = DomainSpec(delta=1.0, gamma=1.5)
    for joint in (spec.delta, spec.kappa):
        for order in (1, 2, 3, 4):
            prev = None
            for h in (0.1, 0.05, 0.025):
                offs = np.arange(order + 1)
                coef = np.array([math.comb(order, k) * (-1) ** k for k in offs])
                x = joint + (offs - order / 2) * h
                diff = abs(np.dot(coef, cutoff_phi(spec, x))) / h**order
                if prev is not None:
                    assert diff <= 4.0 * max(prev, 1.0)
                prev = diff


def test_truncated_cov():
    k = MaternKernel.create(0.5, 1.0)
    spec = DomainSpec(delta=1.0, gamma=1.5)
    assert truncated_cov(k, spec, 0.0) == 1.0
    assert truncated_cov(k, spec, 3.0) == 0.0
    assert truncated_cov(k, spec, 0.8) == pytest.approx(math.exp(-0.8), rel=1e-12)
    x = np.linspace(-3, 3, 501)
    kt = truncated_cov(k, spec, x)
    assert np.all(kt <= k.cov(x) + 1e-15)
    assert np.allclose(kt, kt[::-1])
    assert np.all(kt[np.abs(x) > spec.kappa] == 0.0)
    inside = np.abs(x) <= spec.delta
    assert np.allclose(kt[inside], k.cov(x[inside]))


def test_tensor_cutoff_2d():
    spec = DomainSpec(delta=1.0, gamma=1.5, d=2)
    pts = np.array([[0.5, 0.5], [0.5, 2.5], [1.5, 1.5]])
    vals = cutoff_phi_nd(spec, pts)
    assert vals[0] == 1.0
    assert vals[1] == 0.0
    assert vals[2] == pytest.approx(0.25, rel=1e-14)
    k2 = MaternKernel.create(0.5, 1.0, d=2)
    assert truncated_cov(k2, spec, np.array([[0.0, 0.0]]))[0] == 1.0
