"""
Truncated Laplace noise.

TLap(lambda, z_max) has density proportional to exp(-|z| / lambda) on
[-z_max, z_max]. Sampling inverts the closed-form CDF, so a fixed generator
state always yields the same draws.

All arithmetic is IEEE double precision. Differences such as |x_2i - x_2i-1|
can round to exactly 0; the histogram module decides what happens to them.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import structlog

from .exceptions import InvalidParameterError

logger = structlog.get_logger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class PrivacyBudget:
    """An (epsilon, delta) differential privacy budget."""

    epsilon: float
    delta: float

    def __post_init__(self) -> None:
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise InvalidParameterError(f"epsilon must be positive and finite, got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise InvalidParameterError(f"delta must lie in (0, 1), got {self.delta}")

    def split(self, parts: int = 2) -> "PrivacyBudget":
        """
        Share of the budget for one of ``parts`` sequentially composed stages.

        Args:
            parts: Number of stages sharing the budget equally

        Returns:
            PrivacyBudget(epsilon / parts, delta / parts)
        """
        if parts < 1:
            raise InvalidParameterError(f"parts must be at least 1, got {parts}")
        return PrivacyBudget(self.epsilon / parts, self.delta / parts)


@dataclass(frozen=True)
class TLapParams:
    """Parameters of the truncated Laplace distribution TLap(scale, z_max)."""

    scale: float
    z_max: float

    def __post_init__(self) -> None:
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise InvalidParameterError(f"scale must be positive and finite, got {self.scale}")
        if not self.z_max > 0:
            raise InvalidParameterError(f"z_max must be positive, got {self.z_max}")

    @property
    def truncated_mass(self) -> float:
        """1 - exp(-z_max / scale), the Laplace mass kept by the truncation."""
        return -math.expm1(-self.z_max / self.scale)


def tlap_normalizer(params: TLapParams) -> float:
    """
    Normalizing constant of exp(-|z| / scale) over [-z_max, z_max].

    Args:
        params: Truncated Laplace parameters

    Returns:
        2 * scale * (1 - exp(-z_max / scale))
    """
    return 2.0 * params.scale * params.truncated_mass


def tlap_pdf(params: TLapParams, z: ArrayLike) -> ArrayLike:
    """Density of TLap(params) at ``z``; zero outside the support."""
    z_arr = np.asarray(z, dtype=float)
    inside = np.abs(z_arr) <= params.z_max
    density = np.where(
        inside, np.exp(-np.abs(z_arr) / params.scale) / tlap_normalizer(params), 0.0
    )
    return float(density) if density.ndim == 0 else density


def tlap_cdf(params: TLapParams, z: ArrayLike) -> ArrayLike:
    """
    Closed-form CDF of TLap(params).

    For |z| <= z_max the CDF is 1/2 + sign(z) * (1 - exp(-|z|/scale)) / (2a)
    with a = 1 - exp(-z_max/scale).
    """
    z_arr = np.clip(np.asarray(z, dtype=float), -params.z_max, params.z_max)
    half_mass = -np.expm1(-np.abs(z_arr) / params.scale) / (2.0 * params.truncated_mass)
    cdf = 0.5 + np.sign(z_arr) * half_mass
    return float(cdf) if cdf.ndim == 0 else cdf


def tlap_sample(
    params: TLapParams, rng: np.random.Generator, size: Optional[int] = None
) -> ArrayLike:
    """
    Draw from TLap(params) by inverse-transform sampling.

    A uniform u in (-1, 1) maps to sign(u) * (-scale * log(1 - |u| a)), which
    inverts the CDF above on each half of the support.

    Args:
        params: Truncated Laplace parameters
        rng: Random generator consumed by the draw
        size: Number of draws, or None for a scalar

    Returns:
        A float when size is None, else an array of ``size`` draws
    """
    u = rng.uniform(-1.0, 1.0, size=size)
    magnitude = -params.scale * np.log1p(-np.abs(u) * params.truncated_mass)
    # rounding in log1p can overshoot the bound by an ulp
    draws = np.clip(np.sign(u) * magnitude, -params.z_max, params.z_max)
    return float(draws) if size is None else draws


def required_zmax(sensitivity: float, budget: PrivacyBudget) -> float:
    """
    Smallest truncation bound for which TLap(sensitivity/eps, z_max) is (eps, delta)-DP.

    Args:
        sensitivity: Global L1 sensitivity of the released statistic
        budget: Privacy budget of the release

    Returns:
        sensitivity * ln(4 / delta) / epsilon

    Raises:
        InvalidParameterError: If sensitivity is not positive
    """
    if not sensitivity > 0:
        raise InvalidParameterError(f"sensitivity must be positive, got {sensitivity}")
    return sensitivity * math.log(4.0 / budget.delta) / budget.epsilon


def histogram_noise(budget: PrivacyBudget) -> TLapParams:
    """
    Per-bin noise for an (eps, delta)-DP histogram over any number of bins.

    Moving one record changes two bin counts by one each, and the per-bin
    parameters TLap(4/eps, 8 ln(8/delta)/eps) cover that change.
    """
    return TLapParams(
        scale=4.0 / budget.epsilon,
        z_max=8.0 * math.log(8.0 / budget.delta) / budget.epsilon,
    )


def truncated_laplace_mechanism(
    value: float, sensitivity: float, budget: PrivacyBudget, rng: np.random.Generator
) -> float:
    """
    Release ``value`` with truncated Laplace noise calibrated to ``sensitivity``.

    Args:
        value: The exact statistic
        sensitivity: Its global L1 sensitivity
        budget: Privacy budget spent by this release
        rng: Random generator for the noise

    Returns:
        value + Z with Z ~ TLap(sensitivity/eps, sensitivity ln(4/delta)/eps)
    """
    params = TLapParams(
        scale=sensitivity / budget.epsilon, z_max=required_zmax(sensitivity, budget)
    )
    logger.debug("tlap_release", scale=params.scale, z_max=params.z_max)
    return float(value) + tlap_sample(params, rng)
