"""
Tests for the private first-moment estimator.
"""

import math

import numpy as np
import pytest

from config.profiles import ConstantsProfile
from estimators.moment import (
    estimate_first_moment,
    moment_threshold,
    moment_upper_factor,
    pair_differences,
    validate_declared_c,
)
from mechanisms.exceptions import InsufficientDataError, InvalidParameterError, SoundnessViolation


def test_pair_differences_examples():
    assert list(pair_differences([1, 4, 10, 3])) == [3.0, 7.0]
    assert list(pair_differences([5, 5])) == [0.0]
    assert list(pair_differences([1, 2, 9])) == [1.0]


def test_pair_differences_needs_two_samples():
    for x in ([], [1.0]):
        with pytest.raises(InsufficientDataError):
            pair_differences(x)


def test_declared_c_validation():
    for bad in (1.0, 0.5, -3.0, math.inf, math.nan):
        with pytest.raises(InvalidParameterError):
            validate_declared_c(bad)
    # accepted with a warning
    validate_declared_c(1.5)
    validate_declared_c(2.5)


def test_threshold_and_upper_factor_formulas(relaxed_profile):
    assert moment_threshold(8000, 2.0, relaxed_profile) == pytest.approx(3.0 * 8000 / (8 * 30 * 2 * 1))
    assert moment_upper_factor(4.0, relaxed_profile) == pytest.approx(2 * 30 * 4 * math.sqrt(2.0))
    natural = ConstantsProfile(k_prime=10, k_ip=10, k_moment=10, log_base_two=False)
    assert moment_threshold(800, math.e, natural) == pytest.approx(3.0 * 800 / (8 * 10 * math.e))


def test_identical_data_returns_bottom(rng, budget, relaxed_profile):
    """All differences are zero, so no dyadic bin is occupied."""
    x = np.full(100_000, 3.0)
    result = estimate_first_moment(x, budget, 2.5, relaxed_profile, rng, diagnostics=True)
    assert result.is_bottom
    assert result.diagnostics.zero_pairs == 50_000
    assert result.diagnostics.selected == frozenset()


def test_small_dataset_is_unsound(rng, budget, relaxed_profile):
    x = rng.normal(size=100)
    with pytest.raises(SoundnessViolation):
        estimate_first_moment(x, budget, 2.5, relaxed_profile, rng)


def test_two_point_data_selects_unit_bin(rng, budget, relaxed_profile):
    """Differences are 0 or 1; 1 lies in (1/2, 1], so the estimate is 2^0."""
    x = rng.integers(0, 2, size=200_000).astype(float)
    result = estimate_first_moment(x, budget, 2.5, relaxed_profile, rng, diagnostics=True)
    assert result.m_hat == 1.0
    assert result.diagnostics.selected == frozenset({-1})
    assert result.diagnostics.pairs == 100_000


def test_estimate_is_a_power_of_two_and_scales_exactly(budget, relaxed_profile):
    """Doubling the data shifts every dyadic bin by one with the same noise draws."""
    x = np.random.default_rng(11).normal(size=200_000)
    base = estimate_first_moment(x, budget, 2.5, relaxed_profile, np.random.default_rng(5))
    doubled = estimate_first_moment(2.0 * x, budget, 2.5, relaxed_profile, np.random.default_rng(5))
    assert base.m_hat is not None
    mantissa, _ = math.frexp(base.m_hat)
    assert mantissa == 0.5
    assert doubled.m_hat == 2.0 * base.m_hat


def test_threshold_on_samples_variant(rng, budget, relaxed_profile):
    profile = relaxed_profile.model_copy(update={"threshold_on_pairs": False})
    x = rng.normal(size=200_000)
    result = estimate_first_moment(x, budget, 2.5, profile, rng, diagnostics=True)
    assert result.diagnostics.threshold == pytest.approx(moment_threshold(200_000, 2.5, profile))


@pytest.mark.slow
def test_gaussian_estimate_within_guarantee(budget, relaxed_profile):
    """E|X - mu| <= m_hat <= 2 k' C sqrt(log C) E|X - mu| in at least 99 of 100 runs."""
    c = math.pi / 2 * 1.1
    first = math.sqrt(2.0 / math.pi)
    upper = moment_upper_factor(c, relaxed_profile) * first
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=2_000_000)
        m_hat = estimate_first_moment(x, budget, c, relaxed_profile, rng).m_hat
        hits += m_hat is not None and first <= m_hat <= upper
    assert hits >= 99
