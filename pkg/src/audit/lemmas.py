"""
Numerical checks of the facts the estimators' accuracy rests on.

Each check compares a Monte Carlo or quadrature measurement with the bound
it should satisfy, using oracle quantities from ``distributions`` as ground
truth. Monte Carlo comparisons always carry explicit slack (5 sigma bands or
Clopper-Pearson bounds). Checks whose preconditions fail report "n/a".
"""

import math
from typing import Any, Iterable, Optional, Tuple

import numpy as np
import structlog

from config.profiles import MIN_DECLARED_C, PAPER_PROFILE, ConstantsProfile
from distributions import (
    ConditionedSpec,
    interval_mass,
    mean,
    normalized_variance,
    pairwise_difference_mass,
    pairwise_difference_mean,
    parse_spec,
    quantile,
    sample,
    variance,
)
from estimators.median import empirical_quantile, slice_levels
from mechanisms.exceptions import InvalidParameterError
from utils.rng import SeedLike, as_generator

from .report import AuditReport, clopper_pearson_lower, not_applicable, verdict

logger = structlog.get_logger(__name__)

SIGMAS = 5.0


def _pair_differences(spec: Any, pairs: int, rng: np.random.Generator) -> np.ndarray:
    draws = sample(spec, 2 * pairs, rng)
    return np.abs(draws[0::2] - draws[1::2])


def _mean_band(values: np.ndarray) -> Tuple[float, float]:
    """Sample mean and 5 standard errors."""
    estimate = float(values.mean())
    spread = float(values.std(ddof=1)) / math.sqrt(values.size) if values.size > 1 else 0.0
    return estimate, SIGMAS * spread


def check_q_sandwich(spec: Any, trials: int, rng: SeedLike = 0) -> AuditReport:
    """
    E|X - mu| <= E[Q] <= 2 E|X - mu| for Q = |X - X'|.

    E[Q] is estimated from ``trials`` independent pairs and compared with the
    oracle E|X - mu| inside a 5 sigma band. The oracle E[Q] is recorded too.
    """
    spec = parse_spec(spec)
    name = "q_sandwich"
    first = normalized_variance(spec).first_moment
    q = _pair_differences(spec, trials, as_generator(rng))
    estimate, band = _mean_band(q)
    exact = pairwise_difference_mean(spec)

    if first == 0.0:
        # degenerate: Q is identically zero
        return verdict(
            name,
            estimate,
            0.0,
            violation=float(np.max(q)),
            sample_sizes={"pairs": trials},
            flags=("degenerate",),
            details={"oracle_eq": exact},
        )

    violation = max(first - (estimate + band), (estimate - band) - 2.0 * first)
    return verdict(
        name,
        estimate,
        2.0 * first,
        violation=violation,
        slack=band,
        sample_sizes={"pairs": trials},
        details={"first_moment": first, "oracle_eq": exact},
    )


def check_q_second_moment(spec: Any, trials: int, rng: SeedLike = 0) -> AuditReport:
    """E[Q^2] = 2 Var(X), Monte Carlo against the oracle variance within 5 sigma."""
    spec = parse_spec(spec)
    target = 2.0 * variance(spec)
    squares = _pair_differences(spec, trials, as_generator(rng)) ** 2
    estimate, band = _mean_band(squares)
    return verdict(
        "q_second_moment",
        estimate,
        target,
        violation=abs(estimate - target) - band,
        slack=band,
        sample_sizes={"pairs": trials},
    )


def check_tail_bound(
    spec: Any, t: float, trials: int, rng: SeedLike = 0, confidence: float = 0.99
) -> AuditReport:
    """
    Pr[Q - E[Q] >= t C E[Q]] <= 4 / (t^2 C) with oracle C and E[Q].

    Fails only if a Clopper-Pearson lower bound on the empirical tail exceeds
    the bound. Bounds of 1 or more are vacuous passes and flagged as such.
    """
    spec = parse_spec(spec)
    name = "tail_bound"
    report = normalized_variance(spec)
    if report.degenerate:
        return not_applicable(name, "degenerate", t=t)

    c = report.c_value
    expected_q = pairwise_difference_mean(spec)
    bound = 4.0 / (t * t * c)
    q = _pair_differences(spec, trials, as_generator(rng))
    hits = int(np.count_nonzero(q - expected_q >= t * c * expected_q))
    estimate = hits / trials
    lower = float(clopper_pearson_lower(hits, trials, 1.0 - confidence))
    flags = ("vacuous",) if bound >= 1.0 else ()
    return verdict(
        name,
        estimate,
        bound,
        violation=lower - bound,
        slack=estimate - lower,
        sample_sizes={"pairs": trials},
        flags=flags,
        details={"t": t, "C": c, "expected_q": expected_q},
    )


def _bound_c(report: Any) -> float:
    # the mass bounds are stated for C > 2; any C-bounded law is also C'-bounded for C' >= C
    return max(report.c_value, MIN_DECLARED_C)


def check_interval_mass(spec: Any, profile: ConstantsProfile = PAPER_PROFILE) -> AuditReport:
    """
    Some dyadic bin (2^l, 2^(l+1)] inside I = [E[Q]/2, k' C sqrt(log C) E[Q]]
    carries Pr[Q in bin] >= 1 / (k' C log C). Masses come from quadrature.
    """
    spec = parse_spec(spec)
    name = f"interval_mass[{profile.name}]"
    report = normalized_variance(spec)
    if report.degenerate:
        return not_applicable(name, "degenerate")

    c = _bound_c(report)
    expected_q = pairwise_difference_mean(spec)
    low = expected_q / 2.0
    high = profile.k_prime * c * math.sqrt(profile.log_c(c)) * expected_q
    first_level = math.ceil(math.log2(low))
    last_level = math.floor(math.log2(high)) - 1
    if last_level < first_level:
        return not_applicable(name, "no dyadic bin inside the interval", low=low, high=high)

    masses = {
        level: pairwise_difference_mass(spec, math.ldexp(1.0, level), math.ldexp(1.0, level + 1))
        for level in range(first_level, last_level + 1)
    }
    best = max(masses, key=lambda level: masses[level])
    bound = 1.0 / (profile.k_prime * c * profile.log_c(c))
    return verdict(
        name,
        masses[best],
        bound,
        violation=bound - masses[best],
        details={"level": best, "C": c, "interval": (low, high), "bins": len(masses)},
    )


def check_two_sided_mass(spec: Any, k1: float = 2.0) -> AuditReport:
    """
    Both (mu + E[Z]/(2 k1), mu + 16 C E[Z]) and its mirror image carry mass at
    least 1 / (128 C), where Z = |X - mu| and C is the oracle value.
    """
    if k1 < 2:
        raise InvalidParameterError(f"k1 must be at least 2, got {k1}")
    spec = parse_spec(spec)
    name = "two_sided_mass"
    report = normalized_variance(spec)
    if report.degenerate:
        return not_applicable(name, "degenerate", k1=k1)

    c, first, mu = report.c_value, report.first_moment, mean(spec)
    near, far = first / (2.0 * k1), 16.0 * c * first
    upper_mass = interval_mass(spec, mu + near, mu + far)
    lower_mass = interval_mass(spec, mu - far, mu - near)
    bound = 1.0 / (128.0 * c)
    smallest = min(upper_mass, lower_mass)
    return verdict(
        name,
        smallest,
        bound,
        violation=bound - smallest,
        details={"upper_mass": upper_mass, "lower_mass": lower_mass, "k1": k1, "C": c},
    )


def check_conditional_boundedness(
    spec: Any, k1: float, k2: Optional[float] = None
) -> AuditReport:
    """
    Trimming a C-bounded law keeps it bounded.

    One-sided (``k2`` omitted): conditioning below the 1 - 1/k1 quantile gives
    an 8C-bounded law when k1 >= 128 C. Two-sided: conditioning between the
    1/k1 and 1 - 1/k2 quantiles gives a 64C-bounded law when k1, k2 >= 2048 C.
    Smaller k is reported as n/a.
    """
    spec = parse_spec(spec)
    report = normalized_variance(spec)
    one_sided = k2 is None
    name = "conditional_boundedness[" + ("one_sided" if one_sided else "two_sided") + "]"
    if report.degenerate:
        return not_applicable(name, "degenerate")

    c = report.c_value
    if one_sided:
        if k1 < 128.0 * c:
            return not_applicable(name, "k below 128C", k1=k1, C=c)
        trimmed = ConditionedSpec(base=spec, lo_q=0.0, hi_q=1.0 - 1.0 / k1)
        factor = 8.0
    else:
        assert k2 is not None
        if min(k1, k2) < 2048.0 * c:
            return not_applicable(name, "k below 2048C", k1=k1, k2=k2, C=c)
        trimmed = ConditionedSpec(base=spec, lo_q=1.0 / k1, hi_q=1.0 - 1.0 / k2)
        factor = 64.0

    trimmed_report = normalized_variance(trimmed)
    bound = factor * c
    return verdict(
        name,
        trimmed_report.c_value,
        bound,
        violation=trimmed_report.c_value - trimmed_report.error_bound - bound,
        slack=trimmed_report.error_bound,
        details={"C": c, "k1": k1, "k2": k2},
    )


def check_mean_shift_identity(spec: Any, k: float, tolerance: float = 1e-7) -> AuditReport:
    """
    |mu - mu'| = (mu'' - mu) / (k - 1), where mu' and mu'' are the means of the
    law conditioned below and above its 1 - 1/k quantile.
    """
    if k <= 1:
        raise InvalidParameterError(f"k must exceed 1, got {k}")
    spec = parse_spec(spec)
    cut = 1.0 - 1.0 / k
    mu = mean(spec)
    mu_low = mean(ConditionedSpec(base=spec, lo_q=0.0, hi_q=cut))
    mu_high = mean(ConditionedSpec(base=spec, lo_q=cut, hi_q=1.0))
    lhs, rhs = abs(mu - mu_low), (mu_high - mu) / (k - 1.0)
    scale = max(1.0, abs(mu), abs(mu_high))
    return verdict(
        "mean_shift_identity",
        lhs,
        rhs,
        violation=abs(lhs - rhs) - tolerance * scale,
        slack=tolerance * scale,
        details={"mu": mu, "mu_low": mu_low, "mu_high": mu_high, "k": k},
    )


def check_chebyshev_interval(spec: Any, t: float) -> AuditReport:
    """Pr[X in (mu - t sqrt(C) E[Z], mu + t sqrt(C) E[Z])] >= 1 - 1/t^2."""
    spec = parse_spec(spec)
    name = "chebyshev_interval"
    report = normalized_variance(spec)
    if report.degenerate:
        return not_applicable(name, "degenerate", t=t)
    mu = mean(spec)
    radius = t * math.sqrt(report.c_value) * report.first_moment
    mass = interval_mass(spec, mu - radius, mu + radius)
    bound = 1.0 - 1.0 / (t * t)
    return verdict(name, mass, bound, violation=bound - mass, details={"t": t})


def quantile_sandwich_min_n(k: float, beta: float) -> int:
    """Smallest n with n >= 108 k^2 ln(4 / beta)."""
    return math.ceil(108.0 * k * k * math.log(4.0 / beta))


def quantile_sandwich_events(
    x: np.ndarray, alpha: float, k: float, bounds: Iterable[float]
) -> bool:
    """
    Whether both empirical slice quantiles land strictly inside their
    population windows ``bounds`` = (Q(1/2 - a), Q(1/2 - a + 1/k), Q(1/2 + a - 1/k), Q(1/2 + a)).
    """
    q_lo, q_lo_inner, q_hi_inner, q_hi = bounds
    lo_level, hi_level = slice_levels(alpha, k)
    lower = empirical_quantile(x, lo_level)
    upper = empirical_quantile(x, hi_level)
    return (q_lo < lower < q_lo_inner) and (q_hi_inner < upper < q_hi)


def check_quantile_sandwich(
    spec: Any,
    alpha: float,
    k: float,
    n: int,
    trials: int,
    beta: float = 0.1,
    rng: SeedLike = 0,
) -> AuditReport:
    """
    With n >= 108 k^2 ln(4/beta), the empirical (1/2 - alpha + 1/(2k)) and
    (1/2 + alpha - 1/(2k)) quantiles fall inside their population windows
    with probability at least 1 - beta. The failure rate over ``trials``
    datasets must stay below beta + 3 sigma.
    """
    spec = parse_spec(spec)
    name = "quantile_sandwich"
    needed = quantile_sandwich_min_n(k, beta)
    if n < needed:
        return not_applicable(name, "n below 108 k^2 ln(4/beta)", n=n, needed=needed)

    levels = [0.5 - alpha, 0.5 - alpha + 1.0 / k, 0.5 + alpha - 1.0 / k, 0.5 + alpha]
    bounds = [float(quantile(spec, p)) for p in levels]
    generator = as_generator(rng)
    failures = sum(
        not quantile_sandwich_events(sample(spec, n, generator), alpha, k, bounds) for _ in range(trials)
    )
    rate = failures / trials
    logger.info("quantile_sandwich_finished", n=n, trials=trials, failures=failures)
    band = 3.0 * math.sqrt(beta * (1.0 - beta) / trials)
    return verdict(
        name,
        rate,
        beta,
        violation=rate - (beta + band),
        slack=band,
        sample_sizes={"n": n, "trials": trials},
        details={"alpha": alpha, "k": k, "needed_n": needed},
    )
