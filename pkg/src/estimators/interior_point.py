"""
Private interior point of a dataset drawn from a C-bounded distribution.

``interior_point_main`` spends half the budget on the moment estimate and
half on a noisy histogram with bins of width m_hat / (2 k' C sqrt(log C)).
If two bins clear the threshold, the midpoint between the lowest and highest
selected bins is returned; it lies between two samples.
"""

import math
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Optional, Sequence, Tuple

import numpy as np
import structlog

from config.profiles import ConstantsProfile
from mechanisms.exceptions import InvalidScaleError
from mechanisms.histogram import build_noisy_histogram, thresholded_bins, uniform_binner
from mechanisms.noise import PrivacyBudget, histogram_noise

from .moment import MomentEstimate, estimate_first_moment, validate_declared_c

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class InteriorPointDiagnostics:
    """
    Internal state of one run. Holds noisy and exact counts, so it is only
    produced on request (tests, audits, the experiment harness).
    """

    selected: FrozenSet[int]
    width: Optional[float]
    threshold: Optional[float]
    noisy_counts: Dict[int, float]
    true_counts: Dict[int, int]
    moment: Optional[MomentEstimate] = None

    @property
    def span(self) -> Optional[Tuple[int, int]]:
        if not self.selected:
            return None
        return min(self.selected), max(self.selected)


@dataclass(frozen=True)
class InteriorPointResult:
    """Output point, or None for bottom."""

    point: Optional[float]
    diagnostics: Optional[InteriorPointDiagnostics] = None

    @property
    def is_bottom(self) -> bool:
        return self.point is None


def bin_width(m_hat: float, c: float, profile: ConstantsProfile) -> float:
    """Histogram bin width m_hat / (2 k' C sqrt(log C))."""
    return m_hat / (2.0 * profile.k_prime * c * math.sqrt(profile.log_c(c)))


def interior_threshold(n: int, c: float, profile: ConstantsProfile) -> float:
    """Selection threshold 3n / (k C^3 sqrt(log C))."""
    return 3.0 * n / (profile.k_ip * c**3 * math.sqrt(profile.log_c(c)))


def find_interior_point(
    x: Sequence[float],
    budget: PrivacyBudget,
    c: float,
    m_hat: float,
    profile: ConstantsProfile,
    rng: np.random.Generator,
    diagnostics: bool = False,
) -> InteriorPointResult:
    """
    Locate a point between two heavily occupied histogram bins.

    Args:
        x: Dataset
        budget: Budget consumed by this call
        c: Declared normalized-variance bound
        m_hat: Scale estimate, usually from estimate_first_moment
        profile: Constants profile
        rng: Random generator for the noise
        diagnostics: Attach internal state to the result

    Returns:
        InteriorPointResult with the midpoint formula when two or more bins
        are selected, else bottom

    Raises:
        InvalidScaleError: If m_hat is not positive
        SoundnessViolation: If the threshold does not exceed the noise bound
    """
    if not (m_hat > 0 and math.isfinite(m_hat)):
        raise InvalidScaleError(m_hat)
    validate_declared_c(c)

    arr = np.asarray(x, dtype=float)
    width = bin_width(m_hat, c, profile)
    threshold = interior_threshold(arr.size, c, profile)

    hist = build_noisy_histogram(arr, uniform_binner(width), histogram_noise(budget), rng)
    selected = thresholded_bins(hist, threshold)

    point: Optional[float] = None
    if len(selected) >= 2:
        low, high = min(selected), max(selected)
        point = 0.5 * (low + high + 1) * width
        assert (low + 1) * width <= point <= high * width, "midpoint left the selected span"

    logger.debug("interior_point_found", n=int(arr.size), width=width, bottom=point is None)
    details = (
        InteriorPointDiagnostics(
            selected=selected,
            width=width,
            threshold=threshold,
            noisy_counts={b: hist.counts[b] for b in selected},
            true_counts={b: hist.true_count(b) for b in selected},
        )
        if diagnostics
        else None
    )
    return InteriorPointResult(point=point, diagnostics=details)


def interior_point_main(
    x: Sequence[float],
    budget: PrivacyBudget,
    c: float,
    profile: ConstantsProfile,
    rng: np.random.Generator,
    diagnostics: bool = False,
) -> InteriorPointResult:
    """
    (eps, delta)-DP interior point: moment estimate, then interior search.

    Each stage receives (eps/2, delta/2) and both read the same dataset; a
    bottom from the first stage is returned as bottom.

    Args:
        x: Dataset with at least two samples
        budget: Total budget
        c: Declared normalized-variance bound
        profile: Constants profile
        rng: Random generator for all noise
        diagnostics: Attach internal state of both stages to the result

    Returns:
        InteriorPointResult
    """
    stage = budget.split(2)
    moment = estimate_first_moment(x, stage, c, profile, rng, diagnostics=diagnostics)
    if moment.m_hat is None:
        details = (
            InteriorPointDiagnostics(frozenset(), None, None, {}, {}, moment=moment)
            if diagnostics
            else None
        )
        return InteriorPointResult(point=None, diagnostics=details)

    result = find_interior_point(x, stage, c, moment.m_hat, profile, rng, diagnostics=diagnostics)
    if result.diagnostics is not None:
        result = replace(result, diagnostics=replace(result.diagnostics, moment=moment))
    return result
