"""Periodic Karhunen-Loeve expansion and the restricted frame on D.

The covariance operator of the periodized process has the tensorized
trigonometric eigenfunctions

    t_0(z) = (2 gamma)^(-1/2),
    t_{2m}(z) = gamma^(-1/2) cos(m pi z / gamma),
    t_{2m-1}(z) = gamma^(-1/2) sin(m pi z / gamma),   m >= 1,

with eigenvalue c_m(k_p) shared by every sin/cos combination at frequency
vector m.  Restricting sqrt(eigenvalue) * eigenfunction to the physical
domain D gives the (redundant) expansion functions; no re-orthogonalization
is performed and the classical eigenproblem on D is never solved.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .periodization import SpectralTable

__all__ = ["KLExpansion", "SlopeFit", "kl_expansion", "eval_kl_basis", "kl_decay_report"]

COS, SIN = 0, 1
_PARITY_NAME = {COS: "cos", SIN: "sin"}


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares fit of log(eigenvalue) against log(index)."""

    slope: float
    intercept: float
    residual: float
    j_lo: int
    j_hi: int


class KLExpansion:
    """Decreasing-sorted periodic eigenpairs with frequency/parity labels.

    Entries are sorted by nonincreasing eigenvalue; ties are broken by
    (|m|^2, m, parity) lexicographically so truncations are reproducible.
    Immutable after construction; evaluation is pure and thread-safe.
    """

    def __init__(self, gamma: float, d: int, eigenvalues, freqs, parities):
        self.gamma = float(gamma)
        self.d = int(d)
        self.eigenvalues = np.asarray(eigenvalues, dtype=float)
        self.freqs = np.asarray(freqs, dtype=int).reshape(len(self.eigenvalues), d)
        self.parities = np.asarray(parities, dtype=np.uint8).reshape(len(self.eigenvalues), d)
        self.count = len(self.eigenvalues)

    def entry(self, j: int):
        """(eigenvalue, m, parity names) of the 1-indexed entry j."""
        if not 1 <= j <= self.count:
            raise ValueError(f"index {j} outside [1, {self.count}]")
        i = j - 1
        names = tuple(_PARITY_NAME[p] for p in self.parities[i])
        return float(self.eigenvalues[i]), tuple(int(m) for m in self.freqs[i]), names

    def tail_sum(self, n: int) -> float:
        """Sum of eigenvalues with index j > n (within the representable set)."""
        if not 0 <= n <= self.count:
            raise ValueError(f"n={n} outside [0, {self.count}]")
        return float(self.eigenvalues[n:].sum())

    def basis_matrix(self, x, j_max: int | None = None) -> np.ndarray:
        """Values of psi_j = sqrt(lambda_j) * phi_j at points x, shape (j_max, P).

        x has shape (P,) for d = 1 or (P, d) otherwise.
        """
        j_max = self.count if j_max is None else int(j_max)
        if not 1 <= j_max <= self.count:
            raise ValueError(f"j_max={j_max} outside [1, {self.count}]")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.d == 1:
            x = x.reshape(-1, 1)
        elif x.ndim == 1:
            x = x.reshape(1, self.d)
        if x.shape[-1] != self.d:
            raise ValueError(f"expected points with last axis of length {self.d}")

        out = np.sqrt(self.eigenvalues[:j_max])[:, None] * np.ones((j_max, x.shape[0]))
        gamma = self.gamma
        for ax in range(self.d):
            m = self.freqs[:j_max, ax][:, None]
            par = self.parities[:j_max, ax][:, None]
            ang = m * np.pi * x[None, :, ax] / gamma
            factor = np.where(par == SIN, np.sin(ang), np.cos(ang)) / np.sqrt(gamma)
            factor = np.where(m == 0, 1.0 / np.sqrt(2.0 * gamma), factor)
            out *= factor
        return out


def kl_expansion(table: SpectralTable, count: int) -> KLExpansion:
    """Build the `count` largest periodic eigenpairs from a spectral table.

    Every frequency vector m with 0 <= m_i <= N/4 contributes one entry per
    sin/cos combination (sin absent on axes with m_i = 0), with eigenvalue
    c_m(k_p) read off the even subgrid of the table.
    """
    if not table.is_positive():
        raise ValueError("spectral table failed positivity; eigenvalues would be negative")
    N, d = table.N, table.d
    quarter = N // 4
    even = table.even_subgrid()  # ascending n = -N/4 .. N/4-1 per axis

    def coeff(m):
        # m_i = N/4 maps to index -N/4 (same value by DFT periodicity + evenness)
        pos = tuple(mi + quarter if mi < quarter else 0 for mi in m)
        return float(even[pos])

    entries = []
    for m in product(range(quarter + 1), repeat=d):
        lam = coeff(m)
        parity_axes = [(COS,) if mi == 0 else (COS, SIN) for mi in m]
        for par in product(*parity_axes):
            entries.append((lam, m, par))

    if count > len(entries):
        raise ValueError(f"count={count} exceeds {len(entries)} representable eigenpairs")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")

    entries.sort(key=lambda e: (-e[0], sum(mi * mi for mi in e[1]), e[1], e[2]))
    entries = entries[:count]
    eigenvalues = [e[0] for e in entries]
    freqs = [e[1] for e in entries]
    parities = [e[2] for e in entries]
    return KLExpansion(table.gamma, d, eigenvalues, freqs, parities)


def eval_kl_basis(expansion: KLExpansion, j: int, x):
    """Restricted frame function psi_j^R(x) = sqrt(lambda_j) phi_j(x), j 1-indexed."""
    if not 1 <= j <= expansion.count:
        raise ValueError(f"index {j} outside [1, {expansion.count}]")
    lam, m, par = expansion.entry(j)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0 or (expansion.d > 1 and x.ndim == 1)
    pts = np.atleast_1d(x)
    if expansion.d > 1:
        pts = pts.reshape(-1, expansion.d)
    out = np.full(pts.shape[0], np.sqrt(lam))
    coords = pts.reshape(-1, expansion.d) if expansion.d > 1 else pts.reshape(-1, 1)
    for ax in range(expansion.d):
        mi = m[ax]
        if mi == 0:
            out = out / np.sqrt(2.0 * expansion.gamma)
        else:
            ang = mi * np.pi * coords[:, ax] / expansion.gamma
            trig = np.sin(ang) if par[ax] == "sin" else np.cos(ang)
            out = out * trig / np.sqrt(expansion.gamma)
    return float(out[0]) if scalar else out


def kl_decay_report(expansion: KLExpansion, j_lo: int, j_hi: int) -> SlopeFit:
    """Fit log(lambda_j) ~ slope * log(j) over 1-indexed j in [j_lo, j_hi]."""
    if not (1 <= j_lo < j_hi <= expansion.count):
        raise ValueError(f"need 1 <= j_lo < j_hi <= {expansion.count}, got [{j_lo}, {j_hi}]")
    j = np.arange(j_lo, j_hi + 1)
    lam = expansion.eigenvalues[j_lo - 1 : j_hi]
    if np.any(lam <= 0):
        raise ValueError("nonpositive eigenvalues in fit range")
    logj = np.log(j)
    loglam = np.log(lam)
    coeffs, res, *_ = np.polyfit(logj, loglam, 1, full=True)
    slope, intercept = float(coeffs[0]), float(coeffs[1])
    rms = float(np.sqrt(res[0] / len(j))) if len(res) else 0.0
    return SlopeFit(slope=slope, intercept=intercept, residual=rms, j_lo=j_lo, j_hi=j_hi)
