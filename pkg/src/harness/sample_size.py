"""
Sample sizes at which the accuracy guarantees start to apply.
"""

import math
from typing import Literal, Optional

from config.profiles import ConstantsProfile
from mechanisms.exceptions import InvalidParameterError

Theorem = Literal["interior", "median", "moment"]

# Largest n the harness is expected to run
DESK_SCALE_CAP = 10_000_000


def required_n(
    theorem: Theorem,
    c: float,
    epsilon: float,
    delta: float,
    beta: float,
    profile: ConstantsProfile,
    alpha: Optional[float] = None,
) -> int:
    """
    Sample size from the guarantee of ``theorem``, rounded up.

    - interior: k0 C^3 sqrt(log C) (ln(1/delta)/eps + ln(1/beta))
    - median: k0 max(C^3 sqrt(log C) (ln(1/delta)/eps + ln(1/beta)) / alpha, C^2 ln(1/beta) / alpha^2)
    - moment: k_moment C log C (ln(2/beta) + 16 ln(16/delta)/eps)

    Args:
        theorem: Which guarantee
        c: Normalized-variance bound, above 1
        epsilon: Privacy parameter
        delta: Privacy parameter in (0, 1)
        beta: Failure probability in (0, 1)
        profile: Supplies k0, k_moment and the log base
        alpha: Approximation level, median only

    Returns:
        The smallest integer at or above the formula value
    """
    if not c > 1:
        raise InvalidParameterError(f"C must exceed 1, got {c}")
    if not (epsilon > 0 and 0 < delta < 1 and 0 < beta < 1):
        raise InvalidParameterError("need epsilon > 0 and delta, beta in (0, 1)")

    log_c = profile.log_c(c)
    privacy_term = math.log(1.0 / delta) / epsilon + math.log(1.0 / beta)
    if theorem == "interior":
        value = profile.k0 * c**3 * math.sqrt(log_c) * privacy_term
    elif theorem == "median":
        if alpha is None or not 0 < alpha < 0.25:
            raise InvalidParameterError(f"median requires alpha in (0, 0.25), got {alpha}")
        value = profile.k0 * max(
            c**3 * math.sqrt(log_c) * privacy_term / alpha,
            c**2 * math.log(1.0 / beta) / alpha**2,
        )
    elif theorem == "moment":
        value = profile.k_moment * c * log_c * (math.log(2.0 / beta) + 16.0 * math.log(16.0 / delta) / epsilon)
    else:
        raise InvalidParameterError(f"unknown theorem '{theorem}'")
    return math.ceil(value)


def exceeds_desk_scale(n: int, cap: Optional[int] = None) -> bool:
    """Whether ``n`` is beyond what the harness is expected to run (DESK_SCALE_CAP by default)."""
    return n > (DESK_SCALE_CAP if cap is None else cap)
