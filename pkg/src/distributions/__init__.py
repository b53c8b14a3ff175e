"""
Synthetic distribution suite.

Serializable specs, their runtime laws, and the ground-truth oracle used by
the audits and the experiment harness.
"""

from .families import ContinuousPiece, Law, build_law
from .oracle import (
    BoundednessReport,
    cdf,
    cdf_left,
    first_absolute_moment,
    hard_instance,
    interval_mass,
    mean,
    normalized_variance,
    pairwise_difference_cdf,
    pairwise_difference_mass,
    pairwise_difference_mean,
    quantile,
    require_finite_second_moment,
    sample,
    variance,
)
from .specs import (
    STANDARD_SUITE,
    ConditionedSpec,
    DistributionSpec,
    ExponentialSpec,
    GaussianSpec,
    HardGadgetSpec,
    MixtureComponent,
    MixtureSpec,
    ParetoSpec,
    PointMassSpec,
    ShiftedBernoulliSpec,
    TwoPointSpec,
    UniformSpec,
    parse_spec,
    spec_to_json,
    two_mode_mixture,
)

__all__ = [
    'DistributionSpec',
    'GaussianSpec',
    'UniformSpec',
    'ExponentialSpec',
    'TwoPointSpec',
    'ShiftedBernoulliSpec',
    'PointMassSpec',
    'ParetoSpec',
    'MixtureComponent',
    'MixtureSpec',
    'ConditionedSpec',
    'HardGadgetSpec',
    'STANDARD_SUITE',
    'parse_spec',
    'spec_to_json',
    'two_mode_mixture',
    'Law',
    'ContinuousPiece',
    'build_law',
    'BoundednessReport',
    'sample',
    'quantile',
    'cdf',
    'cdf_left',
    'interval_mass',
    'mean',
    'variance',
    'first_absolute_moment',
    'normalized_variance',
    'pairwise_difference_mean',
    'pairwise_difference_cdf',
    'pairwise_difference_mass',
    'require_finite_second_moment',
    'hard_instance',
]
