"""Matplotlib rendering of run artifacts to PNG files.

Every function takes in-memory arrays plus an output path and writes one
figure; the CLI calls these next to the CSV artifacts when --plot is given.
Rendering is headless (Agg) and has no effect on the numerical outputs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams["figure.dpi"] = 130
plt.rcParams["savefig.bbox"] = "tight"
plt.rcParams["axes.grid"] = True
plt.rcParams["grid.alpha"] = 0.3

__all__ = [
    "save_spectrum_plot",
    "save_gamma_sweep_plot",
    "save_kl_decay_plot",
    "save_wavelet_plot",
    "save_levelsum_plot",
    "save_samples_plot",
    "save_meanfield_plot",
]


def save_spectrum_plot(omega, values, path, title="sampled spectrum of the truncated covariance"):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    pos = np.asarray(values) > 0
    omega = np.asarray(omega)
    ax.semilogy(omega[pos], np.asarray(values)[pos], lw=0.8)
    ax.set_xlabel(r"$\omega$")
    ax.set_ylabel(r"$D_{L,N}(\omega)$")
    ax.set_title(title)
    fig.savefig(path)
    plt.close(fig)


def save_gamma_sweep_plot(nus, lams, gmin, path):
    """gmin indexed as gmin[i_nu, i_lam]."""
    fig, ax = plt.subplots(figsize=(5.5, 4))
    gmin = np.asarray(gmin)
    if len(lams) > 1 and len(nus) > 1:
        pcm = ax.pcolormesh(lams, nus, gmin, shading="nearest")
        fig.colorbar(pcm, ax=ax, label=r"$\gamma_{\min}$")
        ax.set_xlabel(r"$\lambda$")
        ax.set_ylabel(r"$\nu$")
    else:
        if len(lams) == 1:
            ax.plot(nus, gmin[:, 0], "o-")
            ax.set_xlabel(r"$\nu$")
        else:
            ax.plot(lams, gmin[0, :], "o-")
            ax.set_xlabel(r"$\lambda$")
        ax.set_ylabel(r"$\gamma_{\min}$")
    ax.set_title("minimum torus half-width for spectral positivity")
    fig.savefig(path)
    plt.close(fig)


def save_kl_decay_plot(eigenvalues, fit, path):
    fig, ax = plt.subplots(figsize=(5.5, 4))
    j = np.arange(1, len(eigenvalues) + 1)
    ax.loglog(j, eigenvalues, lw=0.9, label="eigenvalues")
    if fit is not None:
        jj = np.array([fit.j_lo, fit.j_hi], dtype=float)
        ax.loglog(jj, np.exp(fit.intercept) * jj**fit.slope, "k--",
                  label=f"slope {fit.slope:.2f}")
        ax.legend()
    ax.set_xlabel("j")
    ax.set_ylabel(r"$\lambda_{p,j}$")
    ax.set_title("periodic eigenvalue decay")
    fig.savefig(path)
    plt.close(fig)


def save_wavelet_plot(curves, path, title="filtered periodic wavelets"):
    """curves: list of (level, x, values)."""
    n = len(curves)
    ncol = 2 if n > 1 else 1
    nrow = (n + ncol - 1) // ncol
    fig, axes = plt.subplots(nrow, ncol, figsize=(5 * ncol, 2.2 * nrow), squeeze=False)
    for k, (level, x, vals) in enumerate(curves):
        ax = axes[k // ncol][k % ncol]
        ax.plot(x, vals, lw=0.8)
        ax.set_title(f"level {level}", fontsize=9)
    for k in range(n, nrow * ncol):
        axes[k // ncol][k % ncol].set_axis_off()
    fig.suptitle(title)
    fig.savefig(path)
    plt.close(fig)


def save_levelsum_plot(levels, sums, path):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(levels, sums, "o-", base=2)
    ax.set_xlabel("level")
    ax.set_ylabel("sup translate sum")
    ax.set_title("level-sum decay")
    fig.savefig(path)
    plt.close(fig)


def save_samples_plot(grid, matrix, path, max_traces=8):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for row in np.asarray(matrix)[:max_traces]:
        ax.plot(grid, row, lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("b(x)")
    ax.set_title("field realizations")
    fig.savefig(path)
    plt.close(fig)


def save_meanfield_plot(x, mean, stderr, path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    x, mean, stderr = map(np.asarray, (x, mean, stderr))
    ax.plot(x, mean, lw=1.2)
    ax.fill_between(x, mean - 2 * stderr, mean + 2 * stderr, alpha=0.3, label=r"$\pm 2$ stderr")
    ax.set_xlabel("x")
    ax.set_ylabel(r"$\bar{u}(x)$")
    ax.set_title("Monte Carlo mean of the diffusion solution")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)
