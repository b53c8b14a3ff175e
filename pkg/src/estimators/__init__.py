"""
Private estimators module.

First-moment estimation, interior point search and the approximate median
built on top of it.
"""

from .interior_point import (
    InteriorPointDiagnostics,
    InteriorPointResult,
    bin_width,
    find_interior_point,
    interior_point_main,
    interior_threshold,
)
from .median import (
    MedianResult,
    empirical_quantile,
    middle_slice,
    private_median,
    slice_levels,
)
from .moment import (
    MomentDiagnostics,
    MomentEstimate,
    estimate_first_moment,
    moment_threshold,
    moment_upper_factor,
    pair_differences,
    validate_declared_c,
)

__all__ = [
    'MomentEstimate',
    'MomentDiagnostics',
    'estimate_first_moment',
    'moment_threshold',
    'moment_upper_factor',
    'pair_differences',
    'validate_declared_c',
    'InteriorPointResult',
    'InteriorPointDiagnostics',
    'bin_width',
    'find_interior_point',
    'interior_point_main',
    'interior_threshold',
    'MedianResult',
    'empirical_quantile',
    'middle_slice',
    'private_median',
    'slice_levels',
]
