"""
Tests for the interior point estimator.
"""

import math

import numpy as np
import pytest

from estimators.interior_point import (
    bin_width,
    find_interior_point,
    interior_point_main,
    interior_threshold,
)
from mechanisms.exceptions import InvalidScaleError, SoundnessViolation
from mechanisms.noise import PrivacyBudget

# width m_hat / 2048 at C = 16 with the power-of-two profile
C_EXACT = 16.0
LOOSE_BUDGET = PrivacyBudget(epsilon=8.0, delta=0.1)


def test_width_and_threshold_formulas(relaxed_profile, power_of_two_profile):
    c = 2.5
    root = math.sqrt(math.log2(c))
    assert bin_width(1.0, c, relaxed_profile) == pytest.approx(1.0 / (2 * 30 * c * root))
    assert interior_threshold(10**6, c, relaxed_profile) == pytest.approx(3e6 / (120 * c**3 * root))
    assert bin_width(2048.0, C_EXACT, power_of_two_profile) == 1.0


def test_two_selected_bins_give_midpoint(rng, power_of_two_profile):
    """S = {0, 5} with w = 1 gives 0.5 * (0 + 5 + 1) = 3."""
    x = np.concatenate([np.full(10_000, 0.5), np.full(10_000, 5.5)])
    result = find_interior_point(x, LOOSE_BUDGET, C_EXACT, 2048.0, power_of_two_profile, rng, diagnostics=True)
    assert result.point == 3.0
    assert result.diagnostics.selected == frozenset({0, 5})
    assert result.diagnostics.span == (0, 5)
    assert 1.0 <= result.point <= 5.0


def test_single_selected_bin_is_bottom(rng, power_of_two_profile):
    x = np.full(20_000, 0.5)
    result = find_interior_point(x, LOOSE_BUDGET, C_EXACT, 2048.0, power_of_two_profile, rng, diagnostics=True)
    assert result.is_bottom
    assert result.diagnostics.selected == frozenset({0})
    assert result.diagnostics.span is None


def test_scale_must_be_positive(rng, relaxed_profile, budget):
    for bad in (0.0, -1.0, math.inf):
        with pytest.raises(InvalidScaleError):
            find_interior_point([1.0, 2.0], budget, 2.5, bad, relaxed_profile, rng)


def test_small_dataset_is_unsound(rng, relaxed_profile, budget):
    with pytest.raises(SoundnessViolation):
        find_interior_point(rng.normal(size=1000), budget, 2.5, 1.0, relaxed_profile, rng)


def test_bottom_from_moment_stage_propagates(rng, relaxed_profile, budget):
    x = np.full(400_000, -2.0)
    result = interior_point_main(x, budget, 2.5, relaxed_profile, rng, diagnostics=True)
    assert result.is_bottom
    assert result.diagnostics.moment is not None
    assert result.diagnostics.moment.is_bottom
    assert result.diagnostics.width is None


def test_selected_bins_hold_true_samples(rng, relaxed_profile, budget):
    """Under a sound threshold every selected bin is occupied."""
    x = rng.normal(size=400_000)
    result = interior_point_main(x, budget, 2.5, relaxed_profile, rng, diagnostics=True)
    details = result.diagnostics
    assert details.selected
    assert all(details.true_counts[b] > 0 for b in details.selected)
    assert set(details.noisy_counts) == set(details.selected)
    assert result.point is not None
    low, high = details.span
    below = x[x < (low + 1) * details.width]
    above = x[x >= high * details.width]
    assert below.size and above.size
    assert below.max() <= result.point <= above.min()


def test_translation_by_bin_multiples_shifts_output(power_of_two_profile):
    """
    Shifting integer data by j bin widths moves every bin by j and reuses the
    same noise draws, so the output moves by exactly j widths.
    """
    x = np.random.default_rng(2).integers(-200, 200, size=200_000).astype(float)
    base = interior_point_main(x, LOOSE_BUDGET, C_EXACT, power_of_two_profile, np.random.default_rng(9), diagnostics=True)
    assert base.point is not None
    width = base.diagnostics.width
    assert width == base.diagnostics.moment.m_hat / 2048.0

    for j in (-7, 3, 40):
        shifted = interior_point_main(
            x + j * width, LOOSE_BUDGET, C_EXACT, power_of_two_profile, np.random.default_rng(9), diagnostics=True
        )
        assert shifted.diagnostics.width == width
        assert shifted.diagnostics.selected == frozenset(b + j for b in base.diagnostics.selected)
        assert shifted.point == base.point + j * width


def test_same_seed_same_output(relaxed_profile, budget):
    x = np.random.default_rng(4).exponential(size=300_000)
    first = interior_point_main(x, budget, 2.5, relaxed_profile, np.random.default_rng(1))
    second = interior_point_main(x, budget, 2.5, relaxed_profile, np.random.default_rng(1))
    assert first.point == second.point


@pytest.mark.slow
def test_gaussian_with_oracle_scale_returns_interior_point(relaxed_profile, budget):
    """With m_hat = E|X - mu| the point lies in [min x, max x] in 99 of 100 runs."""
    m_hat = math.sqrt(2.0 / math.pi)
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=1_000_000)
        point = find_interior_point(x, budget, 2.5, m_hat, relaxed_profile, rng).point
        hits += point is not None and x.min() <= point <= x.max()
    assert hits >= 99


@pytest.mark.slow
@pytest.mark.parametrize(
    "draw",
    [
        lambda rng, n: rng.uniform(0.0, 1.0, size=n),
        lambda rng, n: np.where(rng.random(n) < 0.5, -10.0, 10.0) + rng.normal(size=n),
    ],
    ids=["uniform", "separated_mixture"],
)
def test_main_succeeds_on_bounded_families(draw, relaxed_profile, budget):
    """At least 95% of 200 runs at n = 10^6 return a point in [min x, max x]."""
    hits = 0
    for seed in range(200):
        rng = np.random.default_rng(1000 + seed)
        x = draw(rng, 1_000_000)
        point = interior_point_main(x, budget, 2.5, relaxed_profile, rng).point
        hits += point is not None and x.min() <= point <= x.max()
    assert hits >= 190
