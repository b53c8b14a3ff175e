"""
Statistical audit module.

Empirical differential-privacy falsification tests and numerical checks of
the distributional facts behind the estimators' accuracy.
"""

from .lemmas import (
    check_chebyshev_interval,
    check_conditional_boundedness,
    check_interval_mass,
    check_mean_shift_identity,
    check_q_sandwich,
    check_q_second_moment,
    check_quantile_sandwich,
    check_tail_bound,
    check_two_sided_mass,
    quantile_sandwich_min_n,
)
from .privacy import (
    BOTTOM_CELL,
    empirical_dp_check,
    grid_partition,
    hamming_distance,
    noiseless_histogram_argmax,
    replace_entry,
)
from .report import (
    AUDIT_COLUMNS,
    FAIL,
    NOT_APPLICABLE,
    PASS,
    AuditReport,
    clopper_pearson_interval,
    clopper_pearson_lower,
    clopper_pearson_upper,
)

__all__ = [
    'AuditReport',
    'AUDIT_COLUMNS',
    'PASS',
    'FAIL',
    'NOT_APPLICABLE',
    'clopper_pearson_interval',
    'clopper_pearson_lower',
    'clopper_pearson_upper',
    'BOTTOM_CELL',
    'empirical_dp_check',
    'grid_partition',
    'hamming_distance',
    'noiseless_histogram_argmax',
    'replace_entry',
    'check_q_sandwich',
    'check_q_second_moment',
    'check_tail_bound',
    'check_interval_mass',
    'check_two_sided_mass',
    'check_conditional_boundedness',
    'check_mean_shift_identity',
    'check_chebyshev_interval',
    'check_quantile_sandwich',
    'quantile_sandwich_min_n',
]
