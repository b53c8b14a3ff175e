"""
Audit results and the binomial confidence bounds behind them.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy import stats

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "n/a"

AUDIT_COLUMNS = (
    "experiment_id",
    "check",
    "distribution",
    "status",
    "estimate",
    "bound",
    "slack",
    "violation",
    "sample_size",
    "flags",
)


@dataclass(frozen=True)
class AuditReport:
    """
    Outcome of one statistical check.

    ``violation`` is how far the measured quantity overshoots its bound after
    slack; it is positive exactly when the check fails.
    """

    name: str
    status: str
    estimate: Optional[float] = None
    bound: Optional[float] = None
    slack: float = 0.0
    violation: float = 0.0
    sample_sizes: Dict[str, int] = field(default_factory=dict)
    flags: Tuple[str, ...] = ()
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status == FAIL and not self.violation > 0:
            raise ValueError(f"failed check '{self.name}' must carry a positive violation")

    @property
    def passed(self) -> bool:
        """True unless the check failed; not-applicable counts as passed."""
        return self.status != FAIL

    def to_row(self, experiment_id: str = "", distribution: str = "") -> Dict[str, Any]:
        return {
            "experiment_id": experiment_id,
            "check": self.name,
            "distribution": distribution,
            "status": self.status,
            "estimate": "" if self.estimate is None else repr(float(self.estimate)),
            "bound": "" if self.bound is None else repr(float(self.bound)),
            "slack": repr(float(self.slack)),
            "violation": repr(float(self.violation)),
            "sample_size": sum(self.sample_sizes.values()),
            "flags": ";".join(self.flags),
        }


def not_applicable(name: str, reason: str, **details: Any) -> AuditReport:
    """Report for a check whose precondition does not hold."""
    return AuditReport(name=name, status=NOT_APPLICABLE, flags=(reason,), details=details)


def verdict(
    name: str,
    estimate: float,
    bound: float,
    violation: float,
    slack: float = 0.0,
    **kwargs: Any,
) -> AuditReport:
    """Build a pass/fail report from a signed violation (positive means fail)."""
    return AuditReport(
        name=name,
        status=FAIL if violation > 0 else PASS,
        estimate=estimate,
        bound=bound,
        slack=slack,
        violation=max(0.0, violation),
        **kwargs,
    )


def clopper_pearson_upper(k: Any, n: int, alpha: float) -> Any:
    """
    One-sided Clopper-Pearson upper bound.

    Args:
        k: Number of successes (scalar or array)
        n: Number of Bernoulli trials
        alpha: Allowed probability of failure (one minus confidence)

    Returns:
        p such that Pr[Binomial(n, p) <= k] is approximately alpha
    """
    k = np.asarray(k)
    bound = np.where(k >= n, 1.0, stats.beta.ppf(1 - alpha, k + 1, np.maximum(n - k, 1)))
    return float(bound) if bound.ndim == 0 else bound


def clopper_pearson_lower(k: Any, n: int, alpha: float) -> Any:
    """One-sided Clopper-Pearson lower bound; 0 when no successes were seen."""
    k = np.asarray(k)
    bound = np.where(k <= 0, 0.0, stats.beta.ppf(alpha, np.maximum(k, 1), n - k + 1))
    return float(bound) if bound.ndim == 0 else bound


def clopper_pearson_interval(k: int, n: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Two-sided Clopper-Pearson interval at the given confidence."""
    if n <= 0:
        return 0.0, 1.0
    alpha = (1.0 - confidence) / 2.0
    return float(clopper_pearson_lower(k, n, alpha)), float(clopper_pearson_upper(k, n, alpha))
