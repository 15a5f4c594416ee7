"""Smooth compactly supported cutoff and the truncated covariance.

The cutoff is built from the C-infinity bump

    theta(x) = exp(-1/x) for x > 0, 0 otherwise,

as

    phi(x) = theta((kappa - |x|)/(kappa - delta))
             / [theta((kappa - |x|)/(kappa - delta)) + theta((|x| - delta)/(kappa - delta))],

which equals 1 on [-delta, delta], vanishes outside [-kappa, kappa] and is
monotone on each transition.  In d > 1 it is applied coordinatewise as a
tensor product over the box geometry.  The truncated covariance k_t = k * phi
then has support inside [-kappa, kappa]^d while agreeing with k on
[-delta, delta]^d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import StationaryKernel

__all__ = ["DomainSpec", "bump_theta", "cutoff_phi", "cutoff_phi_nd", "truncated_cov"]


@dataclass(frozen=True)
class DomainSpec:
    """Geometry of the periodic continuation.

    delta is the half-support of exactness (the physical domain fits in
    [-delta/2, delta/2]^d, so covariance arguments live in [-delta, delta]^d),
    gamma the torus half-width, and kappa = 2*gamma - delta the outer radius
    of the cutoff.  Requires gamma > delta, hence kappa > delta.
    """

    delta: float
    gamma: float
    d: int = 1

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not self.gamma > self.delta:
            raise ValueError(f"gamma must exceed delta, got gamma={self.gamma} delta={self.delta}")
        if self.d < 1 or self.d != int(self.d):
            raise ValueError(f"d must be a positive integer, got {self.d}")

    @property
    def kappa(self) -> float:
        """Outer cutoff radius, 2*gamma - delta."""
        return 2.0 * self.gamma - self.delta


def bump_theta(x):
    """exp(-1/x) for x > 0, else 0; C-infinity on the reals."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    if np.any(pos):
        # for tiny positive x, 1/x may overflow and exp underflows to 0,
        # which is the right limit
        with np.errstate(under="ignore", over="ignore"):
            out[pos] = np.exp(-1.0 / x[pos])
    return float(out) if out.ndim == 0 else out


def cutoff_phi(spec: DomainSpec, x):
    """Univariate cutoff profile phi(x); 1 on [-delta, delta], 0 outside [-kappa, kappa]."""
    a = np.abs(np.asarray(x, dtype=float))
    w = spec.kappa - spec.delta
    num = np.atleast_1d(bump_theta((spec.kappa - a) / w))
    den = num + np.atleast_1d(bump_theta((a - spec.delta) / w))
    out = num / den  # den > 0 everywhere: the two bumps never vanish together
    out = out.reshape(a.shape) if a.ndim else out[0]
    return float(out) if a.ndim == 0 else out


def cutoff_phi_nd(spec: DomainSpec, x):
    """Tensor-product cutoff at points x (last axis of length d when d > 1)."""
    if spec.d == 1:
        return cutoff_phi(spec, x)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != spec.d:
        raise ValueError(f"expected points with last axis of length {spec.d}")
    out = cutoff_phi(spec, x[..., 0])
    for i in range(1, spec.d):
        out = out * cutoff_phi(spec, x[..., i])
    return out


def truncated_cov(kernel: StationaryKernel, spec: DomainSpec, x):
    """Truncated covariance k_t(x) = k(x) * phi(x).

    Supported in [-kappa, kappa]^d and equal to k on [-delta, delta]^d.
    """
    if kernel.d != spec.d:
        raise ValueError(f"kernel dimension {kernel.d} != domain dimension {spec.d}")
    return kernel.cov(x) * cutoff_phi_nd(spec, x)
