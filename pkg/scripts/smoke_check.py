#!/usr/bin/env python3
"""
Quick smoke check for development.
Runs each estimator once on a synthetic gaussian dataset.
"""

import sys
from pathlib import Path

# Add src and the project root to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / 'src'))
sys.path.insert(0, str(project_root))


def smoke_check():
    """Run the estimators on a gaussian sample with the relaxed profile."""
    try:
        import numpy as np

        from config.profiles import RELAXED_PROFILE
        from distributions import GaussianSpec, normalized_variance, sample
        from estimators import estimate_first_moment, interior_point_main, private_median
        from mechanisms import PrivacyBudget, PrivateEstimationError

        print("🔒 Running private estimation smoke check...")
        spec = GaussianSpec()
        report = normalized_variance(spec)
        print(f"✅ Oracle C for {spec.label()}: {report.c_value:.4f} ({report.method})")

        rng = np.random.default_rng(7)
        x = sample(spec, 1_000_000, rng)
        budget = PrivacyBudget(1.0, 1e-6)
        c = 2.5

        moment = estimate_first_moment(x, budget, c, RELAXED_PROFILE, rng)
        print(f"✅ Moment estimate: {moment.m_hat} (true E|X - mu| = {report.first_moment:.4f})")

        point = interior_point_main(x, budget, c, RELAXED_PROFILE, rng)
        print(f"✅ Interior point: {point.point} (data range [{x.min():.3f}, {x.max():.3f}])")

        median = private_median(x, budget, 0.1, c, RELAXED_PROFILE, rng)
        print(f"✅ Approximate median: {median.value} (slice {median.slice_bounds})")

        print("🎉 Smoke check completed successfully!")
        return True

    except ImportError as e:
        print(f"❌ Import error: {e}")
        return False
    except PrivateEstimationError as e:
        print(f"❌ Estimation error: {e}")
        return False


if __name__ == "__main__":
    success = smoke_check()
    sys.exit(0 if success else 1)
