"""
Utilities Module

Shared helpers: logging setup and reproducible random streams.
"""

from .logging_config import configure_logging
from .rng import as_generator, derive_seed, trial_streams

__all__ = [
    'configure_logging',
    'as_generator',
    'derive_seed',
    'trial_streams',
]
