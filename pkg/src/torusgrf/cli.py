"""Command-line front end: pipeline orchestration and artifact emission.

Subcommands: gamma-min, spectrum, kl, wavelets, sample, verify, demo-pde.
Every run writes CSV artifacts with a '#'-prefixed metadata preamble (config
echo, version, wall time) plus a JSON sidecar, into --out (default: the
TORUSGRF_OUTDIR environment variable, else the working directory).  CSV
bodies are byte-identical across reruns of the same config and seed; only
the commented preamble carries timestamps.  Exit codes: 0 success, 2 invalid
configuration or usage, 1 runtime failure.  --plot additionally renders a
PNG figure next to each delimited artifact.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .cutoff import DomainSpec
from .diffusion import Mesh1D, mc_mean_field
from .kernel import MaternKernel
from .kl import kl_decay_report, kl_expansion
from .periodization import check_positivity, find_gamma_min, spectral_grid
from .sampler import Representation, empirical_covariance, sample_matrix
from .verify import run_checks
from .wavelet import WaveletFamily, level_sum, localization_profile, max_level

ENV_OUTDIR = "TORUSGRF_OUTDIR"


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def write_csv(path, columns, rows, meta):
    with open(path, "w", encoding="utf-8") as fh:
        for key, val in meta.items():
            fh.write(f"# {key}: {val}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if not isinstance(v, str) else v for v in row) + "\n")


def write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


class Run:
    """Collects config echo, artifacts, and timing for one CLI invocation."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.t0 = time.time()
        self.outdir = args.out or os.environ.get(ENV_OUTDIR) or "."
        os.makedirs(self.outdir, exist_ok=True)
        skip = {"out", "func", "plot", "workers"}
        self.config = {
            k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None
        }
        self.artifacts = []

    def meta(self):
        return {
            "torusgrf": __version__,
            "command": self.command,
            "config": json.dumps(self.config, sort_keys=True),
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }

    def path(self, name: str) -> str:
        p = os.path.join(self.outdir, name)
        self.artifacts.append(name)
        return p

    def finish(self):
        payload = {
            "command": self.command,
            "config": self.config,
            "artifacts": self.artifacts,
            "version": __version__,
            "wall_seconds": round(time.time() - self.t0, 3),
        }
        write_json(os.path.join(self.outdir, f"{self.command.replace('-', '_')}_run.json"), payload)


def _parse_floats(text: str):
    vals = [float(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise ValueError(f"empty list: {text!r}")
    return vals


def _parse_levels(text: str):
    if ".." in text:
        a, b = text.split("..")
        levels = list(range(int(a), int(b) + 1))
    else:
        levels = [int(v) for v in text.split(",") if v.strip()]
    if not levels or min(levels) < 0:
        raise ValueError(f"bad level list: {text!r}")
    return levels


def _setup(args):
    """Kernel, geometry, and spectral table from the common flags."""
    kernel = MaternKernel.create(args.nu, args.lam, args.d)
    N = 2**args.grid_exp
    if args.gamma is None:
        gamma = find_gamma_min(kernel, args.delta, N=N)
    else:
        gamma = args.gamma
    spec = DomainSpec(delta=args.delta, gamma=gamma, d=args.d)
    table = spectral_grid(kernel, spec, N)
    if not check_positivity(table).passed:
        raise ValueError(
            f"sampled spectrum has negative values at gamma={gamma}; "
            "increase gamma or omit it to search automatically"
        )
    return kernel, spec, table


def _gamma_cell(payload):
    nu, lam, delta, d, N = payload
    kernel = MaternKernel.create(nu, lam, d)
    return find_gamma_min(kernel, delta, N=N)


def cmd_gamma_min(args) -> int:
    run = Run("gamma-min", args)
    nus = _parse_floats(args.nus) if args.sweep else [args.nu]
    lams = _parse_floats(args.lambdas) if args.sweep else [args.lam]
    N = 2**args.grid_exp
    cells = [(nu, lam, args.delta, args.d, N) for nu in nus for lam in lams]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            gammas = list(pool.map(_gamma_cell, cells))
    else:
        gammas = [_gamma_cell(c) for c in cells]
    rows = [(nu, lam, g) for (nu, lam, _, _, _), g in zip(cells, gammas)]
    write_csv(run.path("gammamin.csv"), ["nu", "lambda", "gamma_min"], rows, run.meta())
    for nu, lam, g in rows:
        print(f"gamma_min(nu={nu}, lambda={lam}) = {g:.6g}")
    if args.plot:
        from .plots import save_gamma_sweep_plot

        grid = np.array(gammas).reshape(len(nus), len(lams))
        save_gamma_sweep_plot(nus, lams, grid, run.path("gammamin.png"))
    run.finish()
    return 0


def cmd_spectrum(args) -> int:
    run = Run("spectrum", args)
    _, _, table = _setup(args)
    if table.d != 1:
        raise ValueError("spectrum artifact is univariate; use --d 1")
    ks = np.arange(-table.N // 2, table.N // 2)
    rows = [(int(k), table.omega(k), v) for k, v in zip(ks, table.values)]
    write_csv(run.path("spectrum.csv"), ["k", "omega_k", "value"], rows, run.meta())
    print(f"spectrum: N={table.N}, gamma={table.gamma:.6g}, min={table.min_value:.3e}, "
          f"clamped={table.clamped_count}")
    if args.plot:
        from .plots import save_spectrum_plot

        save_spectrum_plot([table.omega(k) for k in ks], table.values, run.path("spectrum.png"))
    run.finish()
    return 0


def cmd_kl(args) -> int:
    run = Run("kl", args)
    _, _, table = _setup(args)
    expansion = kl_expansion(table, args.count)
    rows = []
    for j in range(1, expansion.count + 1):
        lam, m, par = expansion.entry(j)
        rows.append((j, lam, ";".join(str(v) for v in m), ";".join(par)))
    write_csv(run.path("kl.csv"), ["j", "eigenvalue", "m", "parity"], rows, run.meta())

    j_lo, j_hi = args.fit_lo, min(args.fit_hi, expansion.count)
    fit = kl_decay_report(expansion, j_lo, j_hi)
    write_json(
        run.path("kl_decay.json"),
        {
            "config": run.config,
            "fits": [
                {
                    "j_lo": fit.j_lo,
                    "j_hi": fit.j_hi,
                    "slope": fit.slope,
                    "intercept": fit.intercept,
                    "residual": fit.residual,
                }
            ],
        },
    )
    print(f"kl: {expansion.count} eigenpairs, decay slope {fit.slope:.3f} over [{j_lo}, {j_hi}]")
    if args.plot:
        from .plots import save_kl_decay_plot

        save_kl_decay_plot(expansion.eigenvalues, fit, run.path("kl.png"))
    run.finish()
    return 0


def cmd_wavelets(args) -> int:
    run = Run("wavelets", args)
    kernel, spec, table = _setup(args)
    levels = _parse_levels(args.levels)
    cap = max_level(table.N)
    if max(levels) > cap:
        raise ValueError(f"level {max(levels)} exceeds max {cap} for N={table.N}")
    family = WaveletFamily(spec, table, kernel.decay_exponent(), levels=levels)

    curves = []
    for lev in levels:
        mother = family.mother((1,) * spec.d, lev)
        if spec.d == 1:
            x = mother.axis_grid()
            rows = list(zip(x, mother.values))
            write_csv(run.path(f"wavelet_l{lev}.csv"), ["x", "value"], rows, run.meta())
            curves.append((lev, x, mother.values))

    sums = {lev: level_sum(family, lev) for lev in levels}
    rows = []
    prev = None
    for lev in levels:
        ratio = math.log2(sums[lev] / prev) if prev else float("nan")
        rows.append((lev, sums[lev], ratio))
        prev = sums[lev]
    write_csv(run.path("levelsum.csv"), ["level", "sup_sum", "log2_ratio"], rows, run.meta())

    if spec.d == 1:
        loc = {}
        for lev in levels:
            fit = localization_profile(family, (1,), lev)
            loc[str(lev)] = {
                "sup_abs": fit.sup_abs,
                "envelope_order": fit.envelope_order,
                "n_peaks": fit.n_peaks,
            }
        write_json(run.path("localization.json"), {"config": run.config, "levels": loc})

    print("levels:", ", ".join(f"l{lev} sup_sum={sums[lev]:.4g}" for lev in levels))
    if args.plot and spec.d == 1:
        from .plots import save_levelsum_plot, save_wavelet_plot

        save_wavelet_plot(curves, run.path("wavelets.png"))
        save_levelsum_plot(levels, [sums[lev] for lev in levels], run.path("levelsum.png"))
    run.finish()
    return 0


def _build_representation(args, kernel, spec, table) -> Representation:
    if args.rep == "kl":
        expansion = kl_expansion(table, args.truncation)
        return Representation.from_kl(expansion, args.truncation)
    levels = list(range(args.max_level + 1))
    family = WaveletFamily(spec, table, kernel.decay_exponent(), levels=levels)
    return Representation.from_wavelet(family, args.max_level)


def cmd_sample(args) -> int:
    run = Run("sample", args)
    kernel, spec, table = _setup(args)
    if spec.d != 1:
        raise ValueError("sample artifacts are univariate; use --d 1")
    rep = _build_representation(args, kernel, spec, table)
    grid = np.linspace(-args.delta / 2, args.delta / 2, args.grid_points)
    mat = sample_matrix(rep, args.seed, args.count, grid)

    rows = [
        (i, grid[p], mat[i, p])
        for i in range(min(args.count, args.keep))
        for p in range(len(grid))
    ]
    write_csv(run.path("samples.csv"), ["realization", "x", "value"], rows, run.meta())

    quarter = args.delta / 4
    pairs_x = [(-quarter, quarter), (0.0, 0.0), (-quarter, 0.0)]
    idx = [(int(np.argmin(np.abs(grid - a))), int(np.argmin(np.abs(grid - b)))) for a, b in pairs_x]
    stats = empirical_covariance(mat, idx)
    rows = []
    for (ia, ib), (est, se) in zip(idx, stats):
        exact = float(kernel.cov(grid[ia] - grid[ib]))
        rows.append((grid[ia], grid[ib], est, se, exact))
    write_csv(
        run.path("empcov.csv"), ["x", "xprime", "estimate", "stderr", "exact"], rows, run.meta()
    )
    print(f"sampled {args.count} realizations ({rep.describe()}); "
          f"var(0) ~= {mat[:, len(grid) // 2].var(ddof=1):.4f}")
    if args.plot:
        from .plots import save_samples_plot

        save_samples_plot(grid, mat, run.path("samples.png"))
    run.finish()
    return 0


def cmd_verify(args) -> int:
    run = Run("verify", args)
    results = run_checks(args.profile, names=args.only.split(",") if args.only else None)
    payload = []
    failed = 0
    for r in results:
        print(r.line())
        payload.append(
            {"name": r.name, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 2)}
        )
        failed += not r.passed
    write_json(run.path("verify.json"), {"profile": args.profile, "checks": payload})
    run.finish()
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_demo_pde(args) -> int:
    run = Run("demo-pde", args)
    kernel, spec, table = _setup(args)
    if spec.d != 1:
        raise ValueError("the diffusion demo is univariate; use --d 1")
    rep = _build_representation(args, kernel, spec, table)
    mesh = Mesh1D(args.elements, delta=args.delta)
    mean, stderr = mc_mean_field(rep, None, args.samples, args.seed, mesh)
    rows = list(zip(mesh.nodes, mean, stderr))
    write_csv(run.path("meanfield.csv"), ["x", "mean", "stderr"], rows, run.meta())
    center = args.elements // 2
    print(f"mean u(0) = {mean[center]:.5f} +- {stderr[center]:.5f} "
          f"({args.samples} samples, {rep.describe()})")
    if args.plot:
        from .plots import save_meanfield_plot

        save_meanfield_plot(mesh.nodes, mean, stderr, run.path("meanfield.png"))
    run.finish()
    return 0


def _add_common(p, *, gamma_default=None, grid_exp=14):
    p.add_argument("--nu", type=float, default=0.5, help="Matern smoothness (default 0.5)")
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=1.0,
                   help="correlation length (default 1)")
    p.add_argument("--delta", type=float, default=1.0, help="domain diameter (default 1)")
    p.add_argument("--gamma", type=float, default=gamma_default,
                   help="torus half-width; searched automatically when omitted")
    p.add_argument("--d", type=int, default=1, help="spatial dimension (default 1)")
    p.add_argument("--grid-exp", type=int, default=grid_exp,
                   help=f"log2 of the FFT grid size N (default {grid_exp})")
    p.add_argument("--out", default=None, help=f"output directory (default ${ENV_OUTDIR} or .)")
    p.add_argument("--workers", type=int, default=1, help="worker pool size (default 1)")
    p.add_argument("--plot", action="store_true", help="render PNG figures next to the CSVs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusgrf",
        description="Periodic continuation of stationary Gaussian random fields: "
        "spectral positivity, KL and filtered-wavelet expansions, sampling, "
        "and a lognormal diffusion demo.",
    )
    parser.add_argument("--version", action="version", version=f"torusgrf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma-min", help="search the minimal admissible torus half-width")
    _add_common(p)
    p.add_argument("--sweep", action="store_true", help="sweep a (nu, lambda) grid")
    p.add_argument("--nus", default="0.5,1,2,4", help="comma list for --sweep")
    p.add_argument("--lambdas", default="0.25,0.5,1,2", help="comma list for --sweep")
    p.set_defaults(func=cmd_gamma_min)

    p = sub.add_parser("spectrum", help="tabulate the sampled spectrum of k_t")
    _add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("kl", help="periodic KL eigenpairs and decay fit")
    _add_common(p)
    p.add_argument("--count", type=int, default=2048, help="number of eigenpairs (default 2048)")
    p.add_argument("--fit-lo", type=int, default=32)
    p.add_argument("--fit-hi", type=int, default=1024)
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("wavelets", help="synthesize filtered wavelets and decay diagnostics")
    _add_common(p)
    p.add_argument("--levels", default="0..5", help="levels, e.g. 0..5 or 0,2,4 (default 0..5)")
    p.set_defaults(func=cmd_wavelets)

    p = sub.add_parser("sample", help="draw field realizations and empirical covariances")
    _add_common(p)
    p.add_argument("--rep", choices=("kl", "wavelet"), default="kl")
    p.add_argument("--truncation", type=int, default=1024, help="KL term count (default 1024)")
    p.add_argument("--max-level", type=int, default=5, help="wavelet max level (default 5)")
    p.add_argument("--count", type=int, default=1000, help="number of realizations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-points", type=int, default=65)
    p.add_argument("--keep", type=int, default=16, help="realizations written to samples.csv")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run the numerical verification suite")
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    p.add_argument("--only", default=None, help="comma list of check names")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo-pde", help="lognormal diffusion Monte Carlo mean field")
    _add_common(p)
    p.add_argument("--rep", choices=("kl", "wavelet"), default="kl")
    p.add_argument("--truncation", type=int, default=256)
    p.add_argument("--max-level", type=int, default=5)
    p.add_argument("--elements", type=int, default=128)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_demo_pde)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 1
    except Exception as exc:  # runtime failure
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
