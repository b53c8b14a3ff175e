"""
Privacy mechanisms module.

Truncated Laplace noise, the noise-addition mechanism built on it, and
sparse noisy histograms over infinitely many bins.
"""

from .exceptions import (
    ConfigError,
    EmptySliceError,
    InfiniteMomentError,
    InsufficientDataError,
    InvalidParameterError,
    InvalidQuantileError,
    InvalidScaleError,
    NotNeighborsError,
    PrivateEstimationError,
    SoundnessViolation,
    SupportViolationError,
)
from .histogram import (
    NoisyHistogram,
    build_noisy_histogram,
    dyadic_bin,
    thresholded_bins,
    uniform_bin,
    uniform_binner,
)
from .noise import (
    PrivacyBudget,
    TLapParams,
    histogram_noise,
    required_zmax,
    tlap_cdf,
    tlap_normalizer,
    tlap_pdf,
    tlap_sample,
    truncated_laplace_mechanism,
)

__all__ = [
    'PrivacyBudget',
    'TLapParams',
    'histogram_noise',
    'required_zmax',
    'tlap_cdf',
    'tlap_normalizer',
    'tlap_pdf',
    'tlap_sample',
    'truncated_laplace_mechanism',
    'NoisyHistogram',
    'build_noisy_histogram',
    'dyadic_bin',
    'thresholded_bins',
    'uniform_bin',
    'uniform_binner',
    'PrivateEstimationError',
    'InvalidParameterError',
    'SoundnessViolation',
    'InsufficientDataError',
    'InvalidScaleError',
    'InvalidQuantileError',
    'EmptySliceError',
    'InfiniteMomentError',
    'SupportViolationError',
    'NotNeighborsError',
    'ConfigError',
]
