"""
Private approximate median through the middle slice of the data.

The samples strictly between the empirical quantiles at 1/2 - alpha + 1/(2k)
and 1/2 + alpha - 1/(2k) are handed to the interior point estimator. Any
interior point of that slice is, with high probability, an alpha-approximate
median, provided the middle 2*alpha of the distribution is C-bounded. That
condition is a trust assumption: it cannot be checked from private data.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from config.profiles import ConstantsProfile
from mechanisms.exceptions import EmptySliceError, InvalidParameterError, InvalidQuantileError
from mechanisms.noise import PrivacyBudget

from .interior_point import InteriorPointDiagnostics, interior_point_main

logger = structlog.get_logger(__name__)

Rational = Union[int, float, Fraction]


@dataclass(frozen=True)
class MedianResult:
    """Output value (None for bottom) and the data quantiles bounding the slice."""

    value: Optional[float]
    slice_bounds: Tuple[float, float]
    slice_size: int
    diagnostics: Optional[InteriorPointDiagnostics] = None

    @property
    def is_bottom(self) -> bool:
        return self.value is None


def _as_fraction(value: Rational) -> Fraction:
    # floats go through their shortest decimal form so 0.37 means 37/100
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    return Fraction(str(float(value)))


def empirical_quantile(x: Sequence[float], p: Rational) -> float:
    """
    Order statistic x_(floor(p n)), 1-indexed.

    Args:
        x: Dataset (ties kept as duplicates)
        p: Level in [1/n, 1]; floats are read as their decimal value

    Returns:
        The floor(p n)-th smallest sample

    Raises:
        InvalidQuantileError: If p is outside [1/n, 1]
    """
    arr = np.asarray(x, dtype=float)
    n = arr.size
    level = _as_fraction(p)
    if n == 0 or not Fraction(1, n) <= level <= 1:
        raise InvalidQuantileError(p, n)
    rank = math.floor(level * n)
    return float(np.partition(arr, rank - 1)[rank - 1])


def slice_levels(alpha: Rational, k: Rational) -> Tuple[Fraction, Fraction]:
    """Quantile levels (1/2 - alpha + 1/(2k), 1/2 + alpha - 1/(2k))."""
    a, kk = _as_fraction(alpha), _as_fraction(k)
    half_gap = 1 / (2 * kk)
    return Fraction(1, 2) - a + half_gap, Fraction(1, 2) + a - half_gap


def middle_slice(x: Sequence[float], alpha: Rational, k: Rational) -> np.ndarray:
    """
    Samples strictly inside the middle quantile interval, in input order.

    Args:
        x: Dataset
        alpha: Half-width of the targeted quantile band, in (0, 0.25)
        k: Slack parameter; the band is narrowed by 1/(2k) on each side

    Returns:
        The sliced dataset

    Raises:
        InvalidParameterError: If alpha or k are out of range
        InvalidQuantileError: If n is too small for the quantile levels
        EmptySliceError: If no sample lies strictly inside the interval
    """
    if not 0 < float(alpha) < 0.25:
        raise InvalidParameterError(f"alpha must lie in (0, 0.25), got {alpha}")
    if not float(k) > 0:
        raise InvalidParameterError(f"k must be positive, got {k}")
    lo_level, hi_level = slice_levels(alpha, k)
    if not lo_level < hi_level:
        raise InvalidParameterError(f"alpha={alpha} is too small for k={k}")

    arr = np.asarray(x, dtype=float)
    lower = empirical_quantile(arr, lo_level)
    upper = empirical_quantile(arr, hi_level)
    sliced = arr[(arr > lower) & (arr < upper)]
    if sliced.size == 0:
        raise EmptySliceError(lower, upper)
    return sliced


def private_median(
    x: Sequence[float],
    budget: PrivacyBudget,
    alpha: float,
    c: float,
    profile: ConstantsProfile,
    rng: np.random.Generator,
    diagnostics: bool = False,
) -> MedianResult:
    """
    (eps, delta)-DP alpha-approximate median.

    Uses k = median_k_factor * C / alpha for the slice and runs the interior
    point estimator on it with bound median_c_factor * C.

    Args:
        x: Dataset
        budget: Total budget, spent entirely by the interior point stage
        alpha: Approximation level in (0, 0.25)
        c: Declared bound for the middle 2*alpha of the distribution
        profile: Constants profile
        rng: Random generator for all noise
        diagnostics: Attach interior-point internals to the result

    Returns:
        MedianResult
    """
    if not 0 < alpha < 0.25:
        raise InvalidParameterError(f"alpha must lie in (0, 0.25), got {alpha}")
    k = profile.median_k_factor * c / alpha
    arr = np.asarray(x, dtype=float)
    lo_level, hi_level = slice_levels(alpha, k)
    bounds = (empirical_quantile(arr, lo_level), empirical_quantile(arr, hi_level))

    sliced = middle_slice(arr, alpha, k)
    result = interior_point_main(
        sliced, budget, profile.median_c_factor * c, profile, rng, diagnostics=diagnostics
    )
    if result.point is not None and not bounds[0] < result.point < bounds[1]:
        # only reachable if the interior-point soundness argument is broken
        raise AssertionError(f"median output {result.point} outside slice {bounds}")

    logger.debug("median_estimated", n=int(arr.size), slice=int(sliced.size), bottom=result.is_bottom)
    return MedianResult(
        value=result.point,
        slice_bounds=bounds,
        slice_size=int(sliced.size),
        diagnostics=result.diagnostics,
    )
