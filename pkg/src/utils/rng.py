"""
Random stream helpers.

The library owns no global randomness: every randomized function takes a
``numpy.random.Generator``. This module derives reproducible per-trial
streams from a base seed.
"""

from typing import Tuple, Union

import numpy as np

SeedLike = Union[int, np.random.Generator]


def derive_seed(base_seed: int, index: int) -> int:
    """
    Derive the 64-bit seed of trial ``index`` from ``base_seed``.

    Args:
        base_seed: Experiment-wide seed
        index: Trial index

    Returns:
        An integer seed that depends only on (base_seed, index)
    """
    sequence = np.random.SeedSequence(entropy=base_seed, spawn_key=(index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def trial_streams(seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Split a trial seed into independent (data, mechanism) generators."""
    data_seq, mechanism_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(data_seq), np.random.default_rng(mechanism_seq)


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Return ``seed`` unchanged if it is a Generator, else seed a new one."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
