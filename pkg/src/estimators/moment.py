"""
Private estimate of the first central absolute moment E|X - mu|.

Consecutive samples are paired into differences q_i = |x_2i - x_2i-1|,
counted in a noisy dyadic histogram, and the upper edge of the largest bin
clearing the selection threshold is returned. The estimate is a power of two.
"""

import math
from dataclasses import dataclass
from typing import FrozenSet, Optional, Sequence

import numpy as np
import structlog

from config.profiles import ConstantsProfile
from mechanisms.exceptions import InsufficientDataError, InvalidParameterError
from mechanisms.histogram import NoisyHistogram, build_noisy_histogram, dyadic_bin, thresholded_bins
from mechanisms.noise import PrivacyBudget, histogram_noise

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class MomentDiagnostics:
    """Internal state of one estimate; for tests and audits only."""

    histogram: NoisyHistogram
    threshold: float
    selected: FrozenSet[int]
    pairs: int
    zero_pairs: int


@dataclass(frozen=True)
class MomentEstimate:
    """Output of the moment estimator; ``m_hat`` is None for bottom."""

    m_hat: Optional[float]
    diagnostics: Optional[MomentDiagnostics] = None

    @property
    def is_bottom(self) -> bool:
        return self.m_hat is None


def validate_declared_c(c: float) -> None:
    """
    Check a declared normalized-variance bound.

    Values at or below 1 make log C non-positive and are rejected. The
    accuracy guarantees need C > 2; smaller values still run, with a warning.
    """
    if not (c > 1 and math.isfinite(c)):
        raise InvalidParameterError(f"declared C must be a finite value above 1, got {c}")
    if c <= 2:
        logger.warning("declared_c_below_guarantee", C=c)


def pair_differences(x: Sequence[float]) -> np.ndarray:
    """
    Absolute differences of consecutive sample pairs.

    Args:
        x: Dataset in input order

    Returns:
        Array of floor(n/2) values |x_2i - x_2i-1|; an odd trailing sample is dropped

    Raises:
        InsufficientDataError: If fewer than two samples are given
    """
    arr = np.asarray(x, dtype=float)
    if arr.size < 2:
        raise InsufficientDataError(f"need at least 2 samples to form pairs, got {arr.size}")
    pairs = arr.size // 2
    return np.abs(arr[1 : 2 * pairs : 2] - arr[0 : 2 * pairs : 2])


def moment_threshold(n: int, c: float, profile: ConstantsProfile) -> float:
    """Selection threshold 3n / (8 k' C log C)."""
    return 3.0 * n / (8.0 * profile.k_prime * c * profile.log_c(c))


def moment_upper_factor(c: float, profile: ConstantsProfile) -> float:
    """Factor 2 k' C sqrt(log C) bounding the estimate above."""
    return 2.0 * profile.k_prime * c * math.sqrt(profile.log_c(c))


def estimate_first_moment(
    x: Sequence[float],
    budget: PrivacyBudget,
    c: float,
    profile: ConstantsProfile,
    rng: np.random.Generator,
    diagnostics: bool = False,
) -> MomentEstimate:
    """
    Privately estimate E|X - mu| within a factor 2 k' C sqrt(log C).

    The whole ``budget`` is spent on one noisy dyadic histogram of the pair
    differences. Zero differences fall in no dyadic bin and are dropped.

    Args:
        x: Dataset
        budget: Budget consumed by this call
        c: Declared normalized-variance bound
        profile: Constants profile
        rng: Random generator for the noise
        diagnostics: Attach internal state to the result

    Returns:
        MomentEstimate with m_hat = 2^(l+1) for the largest selected bin l, or bottom

    Raises:
        InsufficientDataError: If |x| < 2
        SoundnessViolation: If the threshold does not exceed the noise bound
    """
    validate_declared_c(c)
    q = pair_differences(x)
    positive = q[q > 0]

    n = q.size if profile.threshold_on_pairs else int(np.asarray(x).size)
    threshold = moment_threshold(n, c, profile)

    hist = build_noisy_histogram(positive, dyadic_bin, histogram_noise(budget), rng)
    selected = thresholded_bins(hist, threshold)

    m_hat = math.ldexp(1.0, max(selected) + 1) if selected else None
    logger.debug("moment_estimated", pairs=int(q.size), threshold=threshold, bottom=m_hat is None)
    details = (
        MomentDiagnostics(hist, threshold, selected, int(q.size), int(q.size - positive.size))
        if diagnostics
        else None
    )
    return MomentEstimate(m_hat=m_hat, diagnostics=details)
