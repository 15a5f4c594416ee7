import json
import subprocess
import sys

import pytest

from torusgrf.cli import main


def _body(path):
    with open(path, "rb") as fh:
        return b"".join(line for line in fh if not line.startswith(b"#"))


def test_gamma_min_single(tmp_path, capsys):
    rc = main(["gamma-min", "--nu", "0.5", "--lam", "1", "--grid-exp", "12",
               "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "gamma_min" in out
    assert (tmp_path / "gammamin.csv").exists()
    assert (tmp_path / "gamma_min_run.json").exists()
    val = float(_body(tmp_path / "gammamin.csv").splitlines()[1].split(b",")[2])
    assert val <= 1.5


def test_gamma_min_sweep_plot(tmp_path):
    rc = main(["gamma-min", "--sweep", "--nus", "0.5,1", "--lambdas", "0.5,1",
               "--grid-exp", "11", "--plot", "--out", str(tmp_path)])
    assert rc == 0
    body = _body(tmp_path / "gammamin.csv")
    assert len(body.splitlines()) == 1 + 4
    assert (tmp_path / "gammamin.png").exists()


def test_spectrum_artifact(tmp_path):
    rc = main(["spectrum", "--nu", "0.5", "--lam", "1", "--gamma", "1.5",
               "--grid-exp", "10", "--plot", "--out", str(tmp_path)])
    assert rc == 0
    lines = _body(tmp_path / "spectrum.csv").splitlines()
    assert lines[0] == b"k,omega_k,value"
    assert len(lines) == 1 + 2**10
    assert (tmp_path / "spectrum.png").exists()
    with open(tmp_path / "spectrum.csv", "rb") as fh:
        first = fh.readline()
    assert first.startswith(b"# torusgrf:")


def test_kl_artifacts(tmp_path):
    rc = main(["kl", "--nu", "0.5", "--lam", "1", "--gamma", "1.5", "--grid-exp", "12",
               "--count", "256", "--fit-lo", "16", "--fit-hi", "256", "--out", str(tmp_path)])
    assert rc == 0
    lines = _body(tmp_path / "kl.csv").splitlines()
    assert lines[0] == b"j,eigenvalue,m,parity"
    assert len(lines) == 1 + 256
    fit = json.loads((tmp_path / "kl_decay.json").read_text())
    assert fit["fits"][0]["slope"] == pytest.approx(-2.0, abs=0.4)


def test_wavelets_artifacts(tmp_path):
    rc = main(["wavelets", "--nu", "0.5", "--lam", "1", "--gamma", "1.5", "--grid-exp", "12",
               "--levels", "0..3", "--plot", "--out", str(tmp_path)])
    assert rc == 0
    for lev in range(4):
        assert (tmp_path / f"wavelet_l{lev}.csv").exists()
    lines = _body(tmp_path / "levelsum.csv").splitlines()
    assert lines[0] == b"level,sup_sum,log2_ratio"
    assert len(lines) == 1 + 4
    loc = json.loads((tmp_path / "localization.json").read_text())
    assert set(loc["levels"]) == {"0", "1", "2", "3"}
    assert (tmp_path / "wavelets.png").exists()
    assert (tmp_path / "levelsum.png").exists()


def test_sample_deterministic_bodies(tmp_path):
    args = ["sample", "--nu", "0.5", "--lam", "1", "--gamma", "1.5", "--grid-exp", "12",
            "--truncation", "128", "--count", "50", "--seed", "9", "--grid-points", "17"]
    d1, d2 = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(d1)]) == 0
    assert main(args + ["--out", str(d2)]) == 0
    assert _body(d1 / "samples.csv") == _body(d2 / "samples.csv")
    assert _body(d1 / "empcov.csv") == _body(d2 / "empcov.csv")
    other = tmp_path / "c"
    assert main(args[:-2] + ["--seed", "10", "--out", str(other)]) == 0
    # different seed, different body
    assert _body(d1 / "samples.csv") != _body(other / "samples.csv")


def test_sample_wavelet_rep(tmp_path):
    rc = main(["sample", "--rep", "wavelet", "--max-level", "3", "--gamma", "1.5",
               "--grid-exp", "12", "--count", "20", "--out", str(tmp_path)])
    assert rc == 0
    cov = _body(tmp_path / "empcov.csv").splitlines()
    assert cov[0] == b"x,xprime,estimate,stderr,exact"


def test_demo_pde(tmp_path):
    rc = main(["demo-pde", "--gamma", "1.5", "--grid-exp", "12", "--truncation", "64",
               "--elements", "32", "--samples", "40", "--plot", "--out", str(tmp_path)])
    assert rc == 0
    lines = _body(tmp_path / "meanfield.csv").splitlines()
    assert lines[0] == b"x,mean,stderr"
    assert len(lines) == 1 + 33
    assert (tmp_path / "meanfield.png").exists()


def test_verify_quick_subset(tmp_path, capsys):
    rc = main(["verify", "--profile", "quick",
               "--only", "orthonormality_oracles,localization_stability",
               "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "PASS orthonormality_oracles" in out
    payload = json.loads((tmp_path / "verify.json").read_text())
    assert len(payload["checks"]) == 2


def test_validation_exit_codes(tmp_path, capsys):
    rc = main(["kl", "--count", "-5", "--gamma", "1.5", "--grid-exp", "10",
               "--out", str(tmp_path)])
    assert rc == 2
    rc = main(["wavelets", "--levels", "0..99", "--gamma", "1.5", "--grid-exp", "10",
               "--out", str(tmp_path)])
    assert rc == 2
    rc = main(["spectrum", "--gamma", "0.5", "--out", str(tmp_path)])  # gamma <= delta
    assert rc == 2
    capsys.readouterr()


def test_unknown_flag_usage_error():
    proc = subprocess.run(
        [sys.executable, "-m", "torusgrf.cli", "spectrum", "--no-such-flag"],
        capture_output=True,
    )
    assert proc.returncode == 2
    assert b"usage" in proc.stderr.lower()


def test_outdir_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("TORUSGRF_OUTDIR", str(tmp_path))
    rc = main(["gamma-min", "--nu", "0.5", "--lam", "0.5", "--grid-exp", "11"])
    assert rc == 0
    assert (tmp_path / "gammamin.csv").exists()


def test_workers_sweep_matches_serial(tmp_path):
    base = ["gamma-min", "--sweep", "--nus", "0.5,1", "--lambdas", "1",
            "--grid-exp", "11"]
    d1, d2 = tmp_path / "w1", tmp_path / "w2"
    assert main(base + ["--workers", "1", "--out", str(d1)]) == 0
    assert main(base + ["--workers", "2", "--out", str(d2)]) == 0
    assert _body(d1 / "gammamin.csv") == _body(d2 / "gammamin.csv")
