import math

import numpy as np
import pytest

from torusgrf.sampler import (
    Representation,
    empirical_covariance,
    sample_field,
    sample_matrix,
    truncated_kernel,
    truncation_error,
)


@pytest.fixture(scope="module")
def kl_rep(expansion_std):
    return Representation.from_kl(expansion_std, 1024)


@pytest.fixture(scope="module")
def wav_rep(family_std):
    return Representation.from_wavelet(family_std, 5)


GRID = np.linspace(-0.5, 0.5, 9)


def test_determinism(kl_rep):
    a = sample_matrix(kl_rep, seed=7, count=4, grid=GRID)
    b = sample_matrix(kl_rep, seed=7, count=4, grid=GRID)
    assert np.array_equal(a, b)
    c = sample_matrix(kl_rep, seed=8, count=4, grid=GRID)
    assert not np.array_equal(a, c)
    # realization i is independent of how many are drawn (substream indexing)
    d = sample_matrix(kl_rep, seed=7, count=2, grid=GRID)
    assert np.array_equal(a[:2], d)


def test_sample_field_objects(kl_rep):
    fields = sample_field(kl_rep, seed=3, count=3, grid=GRID)
    assert len(fields) == 3
    assert fields[0].seed == 3 and fields[2].index == 2
    assert fields[0].values.shape == GRID.shape
    assert all(np.all(np.isfinite(f.values)) for f in fields)
    with pytest.raises(ValueError):
        sample_field(kl_rep, seed=3, count=0, grid=GRID)
    with pytest.raises(ValueError):
        sample_field(kl_rep, seed=3, count=2, grid=np.array([]))


def test_mean_and_variance(kl_rep, matern_half):
    M = 4000
    mat = sample_matrix(kl_rep, seed=17, count=M, grid=GRID)
    se = mat.std(axis=0, ddof=1) / math.sqrt(M)
    assert np.all(np.abs(mat.mean(axis=0)) <= 5 * se)
    # variance at the center approximates k(0) = 1 up to the truncation deficit
    center = len(GRID) // 2
    var = mat[:, center].var(ddof=1)
    var_se = mat[:, center].var(ddof=1) * math.sqrt(2.0 / (M - 1))
    deficit = abs(truncated_kernel(kl_rep, 0.0, 0.0) - float(matern_half.cov(0.0)))
    assert abs(var - 1.0) <= 5 * var_se + deficit


def test_empirical_covariance_basics(kl_rep):
    fields = sample_field(kl_rep, seed=5, count=500, grid=GRID)
    [(var_est, _)] = empirical_covariance(fields, [(GRID[4], GRID[4])])
    mat = np.vstack([f.values for f in fields])
    assert var_est == pytest.approx(mat[:, 4].var(ddof=1), rel=1e-12)
    with pytest.raises(ValueError):
        empirical_covariance(fields[:1], [(0.0, 0.0)])
    with pytest.raises(ValueError):
        empirical_covariance(fields, [(0.123456, 0.0)])  # off-grid point


def test_empirical_covariance_white_noise():
    rng = np.random.default_rng(0)
    mat = rng.standard_normal((20000, 2))
    [(offdiag, se)] = empirical_covariance(mat, [(0, 1)])
    assert abs(offdiag) <= 5 * se


def test_covariance_matches_kernel(kl_rep, matern_half):
    M = 8000
    mat = sample_matrix(kl_rep, seed=23, count=M, grid=GRID)
    pairs = [(1, 6), (2, 2), (0, 8)]
    stats = empirical_covariance(mat, pairs)
    for (i, j), (est, se) in zip(pairs, stats):
        exact = float(matern_half.cov(GRID[i] - GRID[j]))
        deficit = abs(truncated_kernel(kl_rep, GRID[i], GRID[j]) - exact)
        assert abs(est - exact) <= 5 * se + deficit


def test_gaussianity_proxy(kl_rep):
    M = 6000
    mat = sample_matrix(kl_rep, seed=29, count=M, grid=GRID)
    z = (mat[:, 3] - mat[:, 3].mean()) / mat[:, 3].std(ddof=1)
    skew = np.mean(z**3)
    kurt = np.mean(z**4) - 3.0
    assert abs(skew) <= 5 * math.sqrt(6.0 / M)
    assert abs(kurt) <= 5 * math.sqrt(24.0 / M)


def test_truncation_error_kl(kl_rep, expansion_std, spec_std):
    full = truncation_error(kl_rep, kl_rep.truncation)
    assert full == 0.0
    deficits = [truncation_error(kl_rep, n) for n in (128, 256, 512)]
    assert all(a >= b for a, b in zip(deficits, deficits[1:]))
    tail_bound = expansion_std.tail_sum(512) / spec_std.gamma
    assert truncation_error(kl_rep, 512) <= tail_bound + 1e-14


def test_truncation_error_wavelet(wav_rep):
    assert truncation_error(wav_rep, wav_rep.truncation) == 0.0
    d3 = truncation_error(wav_rep, 3)
    d4 = truncation_error(wav_rep, 4)
    assert d3 >= d4 >= 0.0
    with pytest.raises(ValueError):
        truncation_error(wav_rep, 99)


def test_representation_validation(expansion_std, family_std):
    with pytest.raises(ValueError):
        Representation.from_kl(expansion_std, 0)
    with pytest.raises(ValueError):
        Representation.from_kl(expansion_std, expansion_std.count + 1)
    with pytest.raises(ValueError):
        Representation.from_wavelet(family_std, 99)
    with pytest.raises(TypeError):
        Representation.from_kl(family_std, 4)
    rep = Representation.from_wavelet(family_std, 5)
    assert rep.n_terms == 1 + sum(2**l for l in range(6))
    assert rep.basis_matrix(GRID).shape == (rep.n_terms, len(GRID))


def test_kl_wavelet_cross_agreement(kl_rep, wav_rep, matern_half):
    M = 6000
    a = sample_matrix(kl_rep, seed=101, count=M, grid=GRID)
    b = sample_matrix(wav_rep, seed=202, count=M, grid=GRID)
    pairs = [(2, 6), (4, 4)]
    for (i, j), (ea, sa), (eb, sb) in zip(
        pairs, empirical_covariance(a, pairs), empirical_covariance(b, pairs)
    ):
        exact = float(matern_half.cov(GRID[i] - GRID[j]))
        da = abs(truncated_kernel(kl_rep, GRID[i], GRID[j]) - exact)
        db = abs(truncated_kernel(wav_rep, GRID[i], GRID[j]) - exact)
        assert abs(ea - eb) <= 5 * math.hypot(sa, sb) + da + db
