import pytest

from torusgrf.cutoff import DomainSpec
from torusgrf.kernel import MaternKernel
from torusgrf.kl import kl_expansion
from torusgrf.periodization import spectral_grid
from torusgrf.wavelet import WaveletFamily


@pytest.fixture(scope="session")
def matern_half():
    """Exponential-covariance kernel, nu = 1/2."""
    return MaternKernel.create(0.5, 1.0)


@pytest.fixture(scope="session")
def spec_std(matern_half):
    """Admissible geometry for nu = 1/2: delta = 1, gamma = 3/2."""
    return DomainSpec(delta=1.0, gamma=1.5)


@pytest.fixture(scope="session")
def table_std(matern_half, spec_std):
    return spectral_grid(matern_half, spec_std, 2**14)


@pytest.fixture(scope="session")
def table_small(matern_half, spec_std):
    return spectral_grid(matern_half, spec_std, 2**13)


@pytest.fixture(scope="session")
def expansion_std(table_std):
    return kl_expansion(table_std, 4096)


@pytest.fixture(scope="session")
def family_std(matern_half, spec_std, table_std):
    return WaveletFamily(spec_std, table_std, matern_half.decay_exponent(), levels=range(0, 7))
