"""Meyer scaling-function and wavelet profiles in the frequency domain.

Explicit C-infinity construction: with the smoothing function
nu(x) = theta(x) / (theta(x) + theta(1-x)) built from the exponential bump,

    scaling_hat(w) = 1                                  for |w| <= 2pi/3,
                     cos(pi/2 * nu(3|w|/(2pi) - 1))     for 2pi/3 < |w| < 4pi/3,
                     0                                  otherwise;

    wavelet_hat(w) = sin(pi/2 * nu(3|w|/(2pi) - 1)) e^{iw/2}   for 2pi/3 < |w| <= 4pi/3,
                     cos(pi/2 * nu(3|w|/(4pi) - 1)) e^{iw/2}   for 4pi/3 < |w| <= 8pi/3,
                     0                                          otherwise.

So supp(scaling_hat) = [-4pi/3, 4pi/3] and supp(wavelet_hat) = +-[2pi/3, 8pi/3],
with scaling_hat^2 + |wavelet_hat|^2 = 1 on the scaling support.  The smoothing
function here is unrelated to the Matern smoothness parameter despite the
shared Greek letter; it is named smoothing_nu throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .cutoff import bump_theta

__all__ = [
    "MeyerPair",
    "DEFAULT_MEYER",
    "smoothing_nu",
    "meyer_scaling_hat",
    "meyer_wavelet_hat",
    "tensor_wavelet_hat",
    "wavelet_types",
]

SCALING_SUPPORT = 4.0 * np.pi / 3.0
WAVELET_SUPPORT = (2.0 * np.pi / 3.0, 8.0 * np.pi / 3.0)


def smoothing_nu(x):
    """C-infinity ramp: 0 for x <= 0, 1 for x >= 1, nu(x) + nu(1-x) = 1."""
    x = np.asarray(x, dtype=float)
    num = np.atleast_1d(bump_theta(x))
    den = num + np.atleast_1d(bump_theta(1.0 - x))
    out = (num / den).reshape(x.shape) if x.ndim else num[0] / den[0]
    return float(out) if x.ndim == 0 else out


def meyer_scaling_hat(omega):
    """Meyer scaling profile; real, even, supported on [-4pi/3, 4pi/3]."""
    omega = np.asarray(omega, dtype=float)
    a = np.abs(np.atleast_1d(omega))
    out = np.zeros_like(a)
    out[a <= 2.0 * np.pi / 3.0] = 1.0
    mid = (a > 2.0 * np.pi / 3.0) & (a < SCALING_SUPPORT)
    if np.any(mid):
        out[mid] = np.cos(0.5 * np.pi * smoothing_nu(3.0 * a[mid] / (2.0 * np.pi) - 1.0))
    out = out.reshape(omega.shape) if omega.ndim else out[0]
    return float(out) if omega.ndim == 0 else out


def meyer_wavelet_hat(omega):
    """Meyer wavelet profile; complex with phase e^{iw/2}, supported on +-[2pi/3, 8pi/3]."""
    omega = np.asarray(omega, dtype=float)
    a = np.abs(np.atleast_1d(omega))
    mod = np.zeros_like(a)
    lo = (a > 2.0 * np.pi / 3.0) & (a <= SCALING_SUPPORT)
    hi = (a > SCALING_SUPPORT) & (a <= WAVELET_SUPPORT[1])
    if np.any(lo):
        mod[lo] = np.sin(0.5 * np.pi * smoothing_nu(3.0 * a[lo] / (2.0 * np.pi) - 1.0))
    if np.any(hi):
        mod[hi] = np.cos(0.5 * np.pi * smoothing_nu(3.0 * a[hi] / (4.0 * np.pi) - 1.0))
    out = mod * np.exp(0.5j * np.atleast_1d(omega).astype(float))
    out = out.reshape(omega.shape) if omega.ndim else out[0]
    return complex(out) if omega.ndim == 0 else out


@dataclass(frozen=True)
class MeyerPair:
    """Bundled scaling/wavelet Fourier profiles with their support descriptors."""

    scaling_hat: callable = field(default=meyer_scaling_hat)
    wavelet_hat: callable = field(default=meyer_wavelet_hat)
    scaling_support: float = SCALING_SUPPORT
    wavelet_support: tuple = WAVELET_SUPPORT


DEFAULT_MEYER = MeyerPair()


def wavelet_types(d: int):
    """All wavelet type vectors eps in {0,1}^d without the all-zero vector."""
    return [eps for eps in product((0, 1), repeat=d) if any(eps)]


def tensor_wavelet_hat(mp: MeyerPair, eps, omega):
    """Tensorized profile: product over axes of scaling_hat (eps_i=0) or wavelet_hat (eps_i=1).

    omega has last axis of length d for d > 1; eps must not be all zero.
    """
    eps = tuple(int(e) for e in np.atleast_1d(eps))
    if not any(eps):
        raise ValueError("eps must contain at least one wavelet axis (not all zero)")
    d = len(eps)
    omega = np.asarray(omega, dtype=float)
    if d == 1:
        axes = [omega]
    else:
        if omega.ndim == 0 or omega.shape[-1] != d:
            raise ValueError(f"expected frequencies with last axis of length {d}")
        axes = [omega[..., i] for i in range(d)]
    out = 1.0 + 0.0j
    for e, w in zip(eps, axes):
        out = out * (mp.wavelet_hat(w) if e else mp.scaling_hat(w))
    return out
