"""Numerical verification suite: decay, localization, and statistics checks.

Each check builds the pipeline at a pinned operating point and compares a
measured quantity (eigenvalue decay slope, level-sum ratio, convergence
order, Gram residual, Monte Carlo statistic) against its theoretical value
and tolerance.  The ``full`` profile runs every check at reference size
with its stated wall-clock budget; ``quick`` shrinks grid sizes and sample
counts for a fast smoke pass.  The acceptance test module and the CLI
``verify`` subcommand both call into this file, so there is a single
definition of every tolerance.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cutoff import DomainSpec
from .diffusion import Mesh1D, apriori_bound_check, assemble_solve, f_dual_norm, mc_mean_field
from .kernel import MaternKernel
from .kl import kl_decay_report, kl_expansion
from .meyer import DEFAULT_MEYER
from .periodization import check_positivity, find_gamma_min, spectral_grid
from .sampler import Representation, empirical_covariance, sample_matrix, truncated_kernel, _substream
from .wavelet import (
    WaveletFamily,
    level_sum,
    localization_profile,
    synthesize_unfiltered_wavelet,
    synthesize_wavelet,
)

__all__ = ["CheckResult", "run_checks", "check_names", "CHECKS"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} [{self.seconds:.1f}s] {self.detail}"


@lru_cache(maxsize=32)
def _kernel(nu: float, lam: float) -> MaternKernel:
    return MaternKernel.create(nu, lam)


@lru_cache(maxsize=32)
def _table(nu: float, lam: float, gamma: float, N: int):
    spec = DomainSpec(delta=1.0, gamma=gamma)
    return spectral_grid(_kernel(nu, lam), spec, N)


@lru_cache(maxsize=32)
def _gamma_min(nu: float, lam: float, N: int) -> float:
    return find_gamma_min(_kernel(nu, lam), 1.0, N=N)


@lru_cache(maxsize=32)
def _expansion(nu: float, lam: float, gamma: float, N: int, count: int):
    return kl_expansion(_table(nu, lam, gamma, N), count)


@lru_cache(maxsize=16)
def _family(nu: float, lam: float, gamma: float, N: int, levels: tuple):
    spec = DomainSpec(delta=1.0, gamma=gamma)
    table = _table(nu, lam, gamma, N)
    return WaveletFamily(spec, table, _kernel(nu, lam).decay_exponent(), levels=levels)


def _fit_order(sizes, diffs, floor: float) -> float:
    """Least-squares convergence order from max-differences, above the noise floor."""
    pts = [(math.log2(s), math.log2(d)) for s, d in zip(sizes, diffs) if d > floor]
    if len(pts) < 3:
        raise RuntimeError("too few differences above the numerical noise floor to fit an order")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    return float(-np.polyfit(xs, ys, 1)[0])


def check_gamma_anchors(profile: str = "full") -> CheckResult:
    """Positivity at the two figure operating points and gamma_min upper anchors."""
    t0 = time.time()
    N = 2**14 if profile == "full" else 2**12
    conds = []
    pos1 = check_positivity(_table(0.5, 1.0, 1.5, N)).passed
    pos2 = check_positivity(_table(4.0, 1.0, 5.0, N)).passed
    conds.append(("positivity(nu=1/2,gamma=3/2)", pos1))
    conds.append(("positivity(nu=4,gamma=5)", pos2))
    budget = 10.0
    anchors = []
    for nu, lam, cap in ((0.5, 1.0, 1.5), (4.0, 1.0, 5.0), (0.5, 0.5, 1.3)):
        ts = time.time()
        g = _gamma_min(nu, lam, N)
        dt = time.time() - ts
        anchors.append(f"gmin({nu},{lam})={g:.3f}<={cap}")
        conds.append((f"gamma_min(nu={nu},lam={lam})", g <= cap and dt < budget))
    passed = all(ok for _, ok in conds)
    detail = "; ".join(anchors) + ("" if passed else " | failed: " + ",".join(n for n, ok in conds if not ok))
    return CheckResult("gamma_min_anchors", passed, detail, time.time() - t0)


def check_kl_decay(profile: str = "full") -> CheckResult:
    """Eigenvalue decay slopes match -(2 nu + 1) at two smoothness values."""
    t0 = time.time()
    if profile == "full":
        N, j_lo, j_hi = 2**14, 32, 1024
        cases = ((0.5, 1.5, -2.0, 0.25), (1.5, None, -4.0, 0.3))
    else:
        N, j_lo, j_hi = 2**13, 32, 512
        cases = ((0.5, 1.5, -2.0, 0.25),)
    msgs, ok = [], True
    for nu, gamma, target, tol in cases:
        if gamma is None:
            gamma = _gamma_min(nu, 1.0, N)
        fit = kl_decay_report(_expansion(nu, 1.0, gamma, N, j_hi + 1), j_lo, j_hi)
        good = abs(fit.slope - target) <= tol
        ok = ok and good
        msgs.append(f"nu={nu}: slope={fit.slope:.3f} target={target}+-{tol}")
    return CheckResult("kl_eigenvalue_decay", ok, "; ".join(msgs), time.time() - t0)


def check_level_sums(profile: str = "full") -> CheckResult:
    """Level-sum log2 ratios match -nu at the stated level windows."""
    t0 = time.time()
    if profile == "full":
        N = 2**14
        # (nu, gamma, synthesized levels, ratios under test, target, tol)
        cases = (
            (0.5, 1.5, (3, 4, 5, 6), (3, 4, 5), -0.5, 0.3),
            (4.0, 5.0, (2, 3, 4, 5, 6, 7), (2, 3, 4), -4.0, 0.6),
        )
    else:
        N = 2**13
        cases = ((0.5, 1.5, (3, 4, 5), (3, 4), -0.5, 0.3),)
    msgs, ok = [], True
    for nu, gamma, levels, tested, target, tol in cases:
        fam = _family(nu, 1.0, gamma, N, tuple(levels))
        sums = {l: level_sum(fam, l) for l in levels}
        ratios = {a: math.log2(sums[b] / sums[a]) for a, b in zip(levels[:-1], levels[1:])}
        good = all(abs(ratios[l] - target) <= tol for l in tested)
        ok = ok and good
        msgs.append(
            f"nu={nu}: ratios=" + ",".join(f"l{l}:{r:.2f}" for l, r in ratios.items())
            + f" tested l={tested} target={target}+-{tol}"
        )
    return CheckResult("wavelet_level_sum_decay", ok, "; ".join(msgs), time.time() - t0)


def check_spectral_convergence(profile: str = "full") -> CheckResult:
    """Grid-refinement differences of the sampled spectrum decay at order >= 2 nu + 1 - 0.3."""
    t0 = time.time()
    nu = 0.5
    Js = range(10, 17) if profile == "full" else range(10, 14)
    tables = {J: _table(nu, 1.0, 1.5, 2**J) for J in Js}
    diffs, sizes = [], []
    for J in list(Js)[:-1]:
        N = 2**J
        a = tables[J].values
        b = tables[J + 1].values[N // 2 : N // 2 + N]
        diffs.append(np.abs(a - b).max())
        sizes.append(N)
    floor = 100 * np.finfo(float).eps * tables[list(Js)[0]].max_value
    order = _fit_order(sizes, diffs, floor)
    want = 2 * nu + 1 - 0.3
    ok = order >= want
    return CheckResult(
        "spectral_self_convergence", ok, f"order={order:.3f} >= {want:.2f} (nu={nu})", time.time() - t0
    )


def check_wavelet_convergence(profile: str = "full") -> CheckResult:
    """Synthesis-grid refinement at fixed level decays at order >= nu + 1/2 - 0.3."""
    t0 = time.time()
    nu, level = 0.5, 2
    Js = range(10, 16) if profile == "full" else range(10, 14)
    mothers = {}
    for J in Js:
        mothers[J] = synthesize_wavelet(_table(nu, 1.0, 1.5, 2**J), DEFAULT_MEYER, (1,), level, J)
    diffs, sizes = [], []
    for J in list(Js)[:-1]:
        a = mothers[J].values
        b = mothers[J + 1].values[::2]
        diffs.append(np.abs(a - b).max())
        sizes.append(2**J)
    floor = 100 * np.finfo(float).eps * max(np.abs(m.values).max() for m in mothers.values())
    order = _fit_order(sizes, diffs, floor)
    want = nu + 0.5 - 0.3
    ok = order >= want
    return CheckResult(
        "wavelet_self_convergence", ok, f"order={order:.3f} >= {want:.2f} (level={level})", time.time() - t0
    )


def check_orthonormality(profile: str = "full") -> CheckResult:
    """Gram matrices of eigenfunctions and unfiltered periodic wavelets are identities."""
    t0 = time.time()
    N = 2**14
    n_kl = 64 if profile == "full" else 32
    max_lev = 4 if profile == "full" else 3
    table = _table(0.5, 1.0, 1.5, N)
    gamma = table.gamma

    exp = _expansion(0.5, 1.0, 1.5, N, n_kl)
    Q = 2**12
    xq = -gamma + np.arange(Q) * (2 * gamma / Q)
    phi = exp.basis_matrix(xq) / np.sqrt(exp.eigenvalues)[:, None]
    gram_kl = phi @ phi.T * (2 * gamma / Q)
    err_kl = float(np.abs(gram_kl - np.eye(n_kl)).max())

    M = N // 2
    rows = [np.full(M, (2 * gamma) ** -0.5)]
    for lev in range(max_lev + 1):
        mother = synthesize_unfiltered_wavelet(table, DEFAULT_MEYER, (1,), lev)
        step = M // 2**lev
        for n in range(2**lev):
            rows.append(np.roll(mother.values, n * step))
    W = np.vstack(rows)
    gram_w = W @ W.T * (2 * gamma / M)
    err_w = float(np.abs(gram_w - np.eye(len(rows))).max())

    ok = err_kl <= 1e-10 and err_w <= 1e-8
    detail = f"kl_gram_err={err_kl:.2e}<=1e-10; meyer_gram_err={err_w:.2e}<=1e-8"
    return CheckResult("orthonormality_oracles", ok, detail, time.time() - t0)


def check_covariance_reconstruction(profile: str = "full") -> CheckResult:
    """Truncated KL kernel sum reproduces the Matern covariance on a probe grid."""
    t0 = time.time()
    nu = 1.5
    if profile == "full":
        N, n_terms, n_probe = 2**14, 2048, 33
    else:
        N, n_terms, n_probe = 2**13, 512, 17
    gamma = _gamma_min(nu, 1.0, N)
    count = min(2 * (N // 4) + 1, 4 * n_terms + 1)
    exp = _expansion(nu, 1.0, gamma, N, count)
    grid = np.linspace(-0.5, 0.5, n_probe)
    B = exp.basis_matrix(grid, j_max=n_terms)
    K_trunc = B.T @ B
    kern = _kernel(nu, 1.0)
    K_exact = kern.cov(grid[:, None] - grid[None, :])
    err = float(np.abs(K_trunc - K_exact).max())
    tol = max(1e-2, exp.tail_sum(n_terms) / gamma)
    ok = err <= tol
    return CheckResult(
        "covariance_reconstruction", ok, f"max_err={err:.2e} <= {tol:.2e} (n={n_terms})", time.time() - t0
    )


_PROBE_PAIRS = [(-0.2, 0.3), (0.0, 0.0), (-0.35, 0.45), (0.1, 0.3), (-0.45, 0.45)]


def check_sampling_statistics(profile: str = "full") -> CheckResult:
    """Empirical covariances match the Matern kernel and agree across representations."""
    t0 = time.time()
    if profile == "full":
        N, n_kl, max_lev, M = 2**14, 4096, 6, 20000
    else:
        N, n_kl, max_lev, M = 2**13, 1024, 5, 4000
    kern = _kernel(0.5, 1.0)
    exp = _expansion(0.5, 1.0, 1.5, N, n_kl)
    fam = _family(0.5, 1.0, 1.5, N, tuple(range(max_lev + 1)))
    kl_rep = Representation.from_kl(exp, n_kl)
    wav_rep = Representation.from_wavelet(fam, max_lev)

    pts = sorted({x for pair in _PROBE_PAIRS for x in pair})
    grid = np.array(pts)
    col = {x: i for i, x in enumerate(pts)}
    idx_pairs = [(col[x], col[xp]) for x, xp in _PROBE_PAIRS]

    kl_mat = sample_matrix(kl_rep, seed=2024, count=M, grid=grid)
    wav_mat = sample_matrix(wav_rep, seed=2025, count=M, grid=grid)
    kl_cov = empirical_covariance(kl_mat, idx_pairs)
    wav_cov = empirical_covariance(wav_mat, idx_pairs)

    msgs, ok = [], True
    for (x, xp), (est, se), (west, wse) in zip(_PROBE_PAIRS, kl_cov, wav_cov):
        exact = float(kern.cov(x - xp))
        deficit = abs(truncated_kernel(kl_rep, x, xp) - exact)
        good_kl = abs(est - exact) <= 5 * se + deficit
        good_xr = abs(est - west) <= 5 * math.hypot(se, wse)
        ok = ok and good_kl and good_xr
        if not (good_kl and good_xr):
            msgs.append(f"pair({x},{xp}): est={est:.4f} wav={west:.4f} exact={exact:.4f} se={se:.4f}")
    detail = f"M={M}, all 5 pairs within 5*stderr(+deficit); kl vs wavelet within 5*combined"
    if msgs:
        detail = "; ".join(msgs)
    return CheckResult("sampling_statistics", ok, detail, time.time() - t0)


def check_pde_demo(profile: str = "full") -> CheckResult:
    """Constant-coefficient exactness, FEM convergence, a-priori bound, and MC agreement."""
    t0 = time.time()
    if profile == "full":
        n_bound, M_mc, mesh_n = 100, 2000, 128
    else:
        n_bound, M_mc, mesh_n = 20, 500, 64
    one = lambda x: np.ones_like(x)
    msgs, ok = [], True

    # u(0) = 1/8 for b = 0, f = 1 (nodally exact for P1 on a uniform mesh)
    mesh = Mesh1D(mesh_n)
    u0 = assemble_solve(np.zeros(mesh_n), one, mesh).value_at_center()
    good = abs(u0 - 0.125) <= 1e-12
    ok &= good
    msgs.append(f"u(0)={u0:.12f} (err {abs(u0 - 0.125):.1e})")

    # L2 convergence ratio ~4 under halving, smooth nonconstant coefficient
    b_fn = lambda x: 0.5 * np.cos(2 * np.pi * x)
    ref_mesh = Mesh1D(2**14)
    ref = assemble_solve(b_fn(ref_mesh.midpoints), one, ref_mesh)
    errs = []
    steps = (64, 128, 256) if profile == "full" else (64, 128)
    for n in steps:
        m = Mesh1D(n)
        sol = assemble_solve(b_fn(m.midpoints), one, m)
        fine = ref.nodal_values[:: 2**14 // n]
        errs.append(math.sqrt(np.mean((sol.nodal_values - fine) ** 2)))
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    good = all(3.3 <= r <= 4.7 for r in ratios)
    ok &= good
    msgs.append("L2 ratios=" + ",".join(f"{r:.2f}" for r in ratios))

    # a-priori bound on random lognormal samples
    N = 2**13
    exp = _expansion(0.5, 1.0, 1.5, N, 1024)
    rep = Representation.from_kl(exp, 1024)
    B = rep.basis_matrix(mesh.midpoints)
    fd = f_dual_norm(one, mesh)
    holds = 0
    for i in range(n_bound):
        b = _substream(99, i).standard_normal(B.shape[0]) @ B
        sol = assemble_solve(b, one, mesh)
        holds += apriori_bound_check(b, sol, fd)
    good = holds == n_bound
    ok &= good
    msgs.append(f"bound holds {holds}/{n_bound}")

    # KL vs wavelet Monte Carlo means of u(0)
    fam = _family(0.5, 1.0, 1.5, 2**14, tuple(range(7)))
    exp14 = _expansion(0.5, 1.0, 1.5, 2**14, 256)
    kl_rep = Representation.from_kl(exp14, 256)
    wav_rep = Representation.from_wavelet(fam, 6)
    mean_k, se_k = mc_mean_field(kl_rep, None, M_mc, 31, mesh)
    mean_w, se_w = mc_mean_field(wav_rep, None, M_mc, 32, mesh)
    c = mesh_n // 2
    gap = abs(mean_k[c] - mean_w[c])
    lim = 3 * math.hypot(se_k[c], se_w[c])
    good = gap <= lim
    ok &= good
    msgs.append(f"mc u(0): kl={mean_k[c]:.4f} wav={mean_w[c]:.4f} gap={gap:.4f}<= {lim:.4f}")

    return CheckResult("pde_demo", bool(ok), "; ".join(msgs), time.time() - t0)


def check_localization(profile: str = "full") -> CheckResult:
    """sup|F_l| of the rescaled mother wavelets is stable across levels."""
    t0 = time.time()
    N = 2**14 if profile == "full" else 2**13
    levels = (2, 3, 4, 5, 6) if profile == "full" else (2, 3, 4, 5)
    fam = _family(0.5, 1.0, 1.5, N, levels)
    sups = [localization_profile(fam, (1,), l).sup_abs for l in levels]
    ratio = max(sups) / min(sups)
    ok = ratio <= 2.0
    detail = "sup|F|=" + ",".join(f"{s:.3f}" for s in sups) + f"; max/min={ratio:.3f}<=2"
    return CheckResult("localization_stability", ok, detail, time.time() - t0)


CHECKS = [
    ("gamma_min_anchors", check_gamma_anchors),
    ("kl_eigenvalue_decay", check_kl_decay),
    ("wavelet_level_sum_decay", check_level_sums),
    ("spectral_self_convergence", check_spectral_convergence),
    ("wavelet_self_convergence", check_wavelet_convergence),
    ("orthonormality_oracles", check_orthonormality),
    ("covariance_reconstruction", check_covariance_reconstruction),
    ("sampling_statistics", check_sampling_statistics),
    ("pde_demo", check_pde_demo),
    ("localization_stability", check_localization),
]


def check_names():
    return [name for name, _ in CHECKS]


def run_checks(profile: str = "quick", names=None) -> list[CheckResult]:
    """Run the named checks (all by default) at the given profile."""
    if profile not in ("quick", "full"):
        raise ValueError(f"profile must be 'quick' or 'full', got {profile!r}")
    wanted = set(names) if names else None
    results = []
    for name, fn in CHECKS:
        if wanted is None or name in wanted:
            results.append(fn(profile))
    return results
