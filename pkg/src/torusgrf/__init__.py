"""Stationary Gaussian random fields on bounded domains via periodic continuation.

Truncate the covariance with a smooth cutoff, periodize onto a torus chosen
large enough that the sampled spectrum stays nonnegative, and expand the
periodic field in either the trigonometric eigenbasis or a spectrally
filtered Meyer wavelet system; restriction to the physical domain gives
expansions with i.i.d. standard normal coefficients.
"""

from .cutoff import DomainSpec, bump_theta, cutoff_phi, truncated_cov
from .kernel import MaternKernel, MaternParams, StationaryKernel, bessel_k, matern_cov, matern_spectral
from .kl import KLExpansion, SlopeFit, eval_kl_basis, kl_decay_report, kl_expansion
from .meyer import (
    DEFAULT_MEYER,
    MeyerPair,
    meyer_scaling_hat,
    meyer_wavelet_hat,
    smoothing_nu,
    tensor_wavelet_hat,
)
from .periodization import (
    PositivityReport,
    SpectralTable,
    check_positivity,
    find_gamma_min,
    kp_fourier_coeff,
    spectral_grid,
)
from .sampler import (
    FieldRealization,
    Representation,
    empirical_covariance,
    sample_field,
    truncation_error,
)
from .wavelet import (
    GridFunction,
    WaveletFamily,
    eval_wavelet,
    level_sum,
    localization_profile,
    scaling_constant,
    synthesize_wavelet,
)
from .diffusion import Mesh1D, FemSolution, apriori_bound_check, assemble_solve, mc_mean_field

__version__ = "0.1.0"
