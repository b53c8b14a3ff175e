"""
Test Configuration and Fixtures

Shared fixtures for the test suite. Every randomized test draws from a
seeded generator so failures reproduce.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))
sys.path.insert(0, str(project_root))

from config.profiles import PAPER_PROFILE, RELAXED_PROFILE, ConstantsProfile  # noqa: E402
from mechanisms.noise import PrivacyBudget  # noqa: E402

@pytest.fixture
def rng():
    """Seeded generator; each test gets a fresh one."""
    return np.random.default_rng(20240517)

@pytest.fixture
def budget():
    """The (1, 1e-6) budget used by the acceptance runs."""
    return PrivacyBudget(epsilon=1.0, delta=1e-6)

@pytest.fixture
def relaxed_profile():
    return RELAXED_PROFILE

@pytest.fixture
def paper_profile():
    return PAPER_PROFILE

@pytest.fixture
def power_of_two_profile():
    """
    Profile whose bin width at C=16 is m_hat / 2048, a power of two, so
    shifting integer data by multiples of the width is exact.
    """
    return ConstantsProfile(name="custom", k_prime=32, k_ip=1, k_moment=256)

@pytest.fixture
def output_dir(tmp_path):
    """Scratch directory for CSV/JSON reports."""
    path = tmp_path / "results"
    path.mkdir()
    return path
