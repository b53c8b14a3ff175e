"""
Ground-truth oracle for distribution specs.

Sampling, quantiles, CDFs and the moment quantities the estimators and the
audits are judged against. Closed forms are used where they exist; anything
else goes through adaptive quadrature on the runtime law, or Monte Carlo on
request.
"""

import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
import structlog

from mechanisms.exceptions import InfiniteMomentError, InvalidParameterError
from utils.rng import SeedLike, as_generator

from .families import build_law
from .specs import (
    ConditionedSpec,
    ExponentialSpec,
    GaussianSpec,
    HardGadgetSpec,
    MixtureSpec,
    ParetoSpec,
    PointMassSpec,
    ShiftedBernoulliSpec,
    TwoPointSpec,
    UniformSpec,
    parse_spec,
)

logger = structlog.get_logger(__name__)

METHODS = ("closed-form", "quadrature", "monte-carlo")


@dataclass(frozen=True)
class BoundednessReport:
    """
    Normalized variance E|X - mu|^2 / (E|X - mu|)^2 of a distribution.

    ``degenerate`` marks distributions with E|X - mu| = 0, for which the ratio
    is reported as 1.
    """

    first_moment: float
    second_moment: float
    c_value: float
    method: str
    error_bound: float
    degenerate: bool = False


def require_finite_second_moment(spec: Any) -> None:
    """
    Raises:
        InfiniteMomentError: If some part of ``spec`` has no finite variance
    """
    if isinstance(spec, ParetoSpec) and spec.a <= 2:
        raise InfiniteMomentError(f"pareto needs shape a > 2 for a finite variance, got a={spec.a}")
    if isinstance(spec, MixtureSpec):
        for component in spec.components:
            require_finite_second_moment(component.spec)
    elif isinstance(spec, ConditionedSpec) and spec.hi_q >= 1:
        require_finite_second_moment(spec.base)
    elif isinstance(spec, HardGadgetSpec):
        require_finite_second_moment(spec.core)


def sample(spec: Any, n: int, rng: SeedLike) -> np.ndarray:
    """
    Draw n i.i.d. samples.

    Args:
        spec: Distribution spec
        n: Number of samples, at least 1
        rng: Generator or integer seed

    Returns:
        Array of n samples
    """
    if n < 1:
        raise InvalidParameterError(f"sample size must be at least 1, got {n}")
    return build_law(parse_spec(spec)).sample(int(n), as_generator(rng))


def quantile(spec: Any, p: Any) -> Any:
    """Left-continuous generalized inverse Q(p) = inf{x : F(x) >= p} for p in (0, 1)."""
    return build_law(parse_spec(spec)).quantile(p)


def cdf(spec: Any, x: Any) -> Any:
    """Pr[X <= x]."""
    return build_law(parse_spec(spec)).cdf(x)


def cdf_left(spec: Any, x: Any) -> Any:
    """Pr[X < x]."""
    return build_law(parse_spec(spec)).cdf_left(x)


def interval_mass(spec: Any, a: float, b: float) -> float:
    """Probability of the open interval (a, b)."""
    law = build_law(parse_spec(spec))
    if not a < b:
        return 0.0
    return max(0.0, float(law.cdf_left(b)) - float(law.cdf(a)))


def mean(spec: Any) -> float:
    spec = parse_spec(spec)
    require_finite_second_moment(spec)
    value, _ = build_law(spec).expect(lambda t: t)
    return value


def first_absolute_moment(spec: Any) -> float:
    """E|X - mu|."""
    return normalized_variance(spec).first_moment


def variance(spec: Any) -> float:
    return normalized_variance(spec).second_moment


def _closed_form_moments(spec: Any) -> Optional[tuple]:
    if isinstance(spec, GaussianSpec):
        return spec.sigma * math.sqrt(2.0 / math.pi), spec.sigma**2
    if isinstance(spec, UniformSpec):
        width = spec.b - spec.a
        return width / 4.0, width**2 / 12.0
    if isinstance(spec, ExponentialSpec):
        return 2.0 / (math.e * spec.rate), 1.0 / spec.rate**2
    if isinstance(spec, (TwoPointSpec, ShiftedBernoulliSpec)):
        gap = spec.b - spec.a if isinstance(spec, TwoPointSpec) else 1.0
        spread = spec.p * (1.0 - spec.p)
        return 2.0 * spread * gap, spread * gap**2
    if isinstance(spec, PointMassSpec):
        return 0.0, 0.0
    if isinstance(spec, ParetoSpec):
        a, x_m = spec.a, spec.x_m
        mu = a * x_m / (a - 1.0)
        first = 2.0 * x_m**a * mu ** (1.0 - a) / (a - 1.0)
        second = x_m**2 * a / ((a - 1.0) ** 2 * (a - 2.0))
        return first, second
    return None


def _report(first: float, second: float, method: str, error: float) -> BoundednessReport:
    if first <= 0.0:
        return BoundednessReport(0.0, max(second, 0.0), 1.0, method, error, degenerate=True)
    # Jensen gives ratio >= 1; anything below is rounding
    ratio = max(1.0, second / first**2)
    return BoundednessReport(first, second, ratio, method, error)


def normalized_variance(
    spec: Any,
    method: Optional[str] = None,
    rng: SeedLike = 0,
    mc_samples: int = 1_000_000,
    mc_batches: int = 20,
) -> BoundednessReport:
    """
    Compute C = E|X - mu|^2 / (E|X - mu|)^2.

    Args:
        spec: Distribution spec
        method: Force "closed-form", "quadrature" or "monte-carlo"; by default
            the closed form is used when one exists, else quadrature
        rng: Generator or seed for the Monte Carlo path
        mc_samples: Total Monte Carlo draws
        mc_batches: Batches used for the batch-means error estimate

    Returns:
        BoundednessReport; its ``error_bound`` is an absolute bound on c_value
        (quadrature error propagation, or a 5 sigma batch-means band)

    Raises:
        InfiniteMomentError: If the spec has no finite second moment
        InvalidParameterError: If a closed form is forced where none exists
    """
    spec = parse_spec(spec)
    require_finite_second_moment(spec)
    if method is not None and method not in METHODS:
        raise InvalidParameterError(f"unknown oracle method '{method}', expected one of {METHODS}")

    if method in (None, "closed-form"):
        closed = _closed_form_moments(spec)
        if closed is not None:
            return _report(closed[0], closed[1], "closed-form", 0.0)
        if method == "closed-form":
            raise InvalidParameterError(f"no closed form for {spec.kind}")

    law = build_law(spec)
    if method == "monte-carlo":
        return _monte_carlo_report(spec, law, as_generator(rng), mc_samples, mc_batches)

    mu, mu_err = law.expect(lambda t: t)
    first, first_err = law.expect(lambda t: np.abs(t - mu), extra_points=[mu])
    second, second_err = law.expect(lambda t: (t - mu) ** 2, extra_points=[mu])
    if first <= 0.0:
        return _report(first, second, "quadrature", 0.0)
    first_err += mu_err
    error = second_err / first**2 + 2.0 * second * first_err / first**3
    report = _report(first, second, "quadrature", error)
    logger.debug("normalized_variance", spec=spec.label(), C=report.c_value, error=error)
    return report


def _monte_carlo_report(spec: Any, law: Any, rng: np.random.Generator, total: int, batches: int) -> BoundednessReport:
    mu, _ = law.expect(lambda t: t)
    per_batch = max(1, total // batches)
    firsts = np.empty(batches)
    seconds = np.empty(batches)
    for i in range(batches):
        deviation = np.abs(law.sample(per_batch, rng) - mu)
        firsts[i] = deviation.mean()
        seconds[i] = np.mean(deviation**2)
    first, second = float(firsts.mean()), float(seconds.mean())
    if first <= 0.0:
        return _report(first, second, "monte-carlo", 0.0)
    sd_first = float(firsts.std(ddof=1)) / math.sqrt(batches)
    sd_second = float(seconds.std(ddof=1)) / math.sqrt(batches)
    ratio = second / first**2
    error = 5.0 * ratio * (sd_second / second + 2.0 * sd_first / first)
    logger.debug("normalized_variance", spec=spec.label(), C=ratio, error=error, method="monte-carlo")
    return _report(first, second, "monte-carlo", error)


def pairwise_difference_mean(spec: Any) -> float:
    """E|X - X'| for independent copies, computed as 2 * integral of F(1 - F)."""
    spec = parse_spec(spec)
    require_finite_second_moment(spec)
    law = build_law(spec)
    value, _ = law.integrate_over_support(lambda t: float(law.cdf(t)) * (1.0 - float(law.cdf(t))))
    return 2.0 * value


def pairwise_difference_cdf(spec: Any, q: float) -> float:
    """Pr[|X - X'| <= q] = E[F(X + q) - F(X - q -)]."""
    if q < 0:
        return 0.0
    law = build_law(parse_spec(spec))
    kinks = [b + s for b in law.breakpoints() for s in (-q, q)]
    value, _ = law.expect(lambda t: law.cdf(t + q) - law.cdf_left(t - q), extra_points=kinks)
    return min(1.0, max(0.0, value))


def pairwise_difference_mass(spec: Any, lower: float, upper: float) -> float:
    """Pr[|X - X'| in (lower, upper]]."""
    if not lower < upper:
        return 0.0
    return max(0.0, pairwise_difference_cdf(spec, upper) - pairwise_difference_cdf(spec, lower))


def hard_instance(core: Any) -> HardGadgetSpec:
    """
    Wrap a core supported in [-1/2, 1/2) into the hard-instance gadget.

    The gadget puts 1/4 at -1, 1/4 at +1 and 1/2 on the core. Its normalized
    variance is bounded, yet the 0.3 and 0.7 quantiles both fall in the core,
    so an approximate median of the gadget is an interior point of the core.

    Raises:
        SupportViolationError: If the core leaves [-1/2, 1/2)
    """
    gadget = HardGadgetSpec(core=parse_spec(core))
    build_law(gadget)
    report = normalized_variance(gadget)
    logger.info("hard_instance_built", core=gadget.core.label(), C=report.c_value)
    return gadget
