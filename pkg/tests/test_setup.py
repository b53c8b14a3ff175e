"""
Basic test to verify project structure and imports.
"""

import json
import sys
from pathlib import Path

# Add src to Python path for testing
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))


def test_project_structure():
    """Test that all required directories exist."""
    required_dirs = [
        "src",
        "src/mechanisms",
        "src/estimators",
        "src/distributions",
        "src/audit",
        "src/harness",
        "src/utils",
        "config",
        "config/experiments",
        "tests",
        "scripts",
    ]

    for dir_path in required_dirs:
        full_path = project_root / dir_path
        assert full_path.exists(), f"Required directory {dir_path} does not exist"
        assert full_path.is_dir(), f"{dir_path} exists but is not a directory"


def test_config_files_exist():
    """Test that required configuration files exist."""
    required_files = [
        "requirements.txt",
        "pyproject.toml",
        "README.md",
        ".env.example",
        "setup.sh",
    ]

    for file_path in required_files:
        full_path = project_root / file_path
        assert full_path.exists(), f"Required file {file_path} does not exist"
        assert full_path.is_file(), f"{file_path} exists but is not a file"


def test_config_imports():
    """Test that configuration modules can be imported."""
    from config.profiles import NAMED_PROFILES
    from config.settings import settings

    assert settings is not None
    assert set(NAMED_PROFILES) == {"paper", "relaxed"}


def test_package_structure():
    """Test that package __init__.py files exist."""
    init_files = [
        "src/__init__.py",
        "src/mechanisms/__init__.py",
        "src/estimators/__init__.py",
        "src/distributions/__init__.py",
        "src/audit/__init__.py",
        "src/harness/__init__.py",
        "src/utils/__init__.py",
        "config/__init__.py",
    ]

    for init_file in init_files:
        full_path = project_root / init_file
        assert full_path.exists(), f"Package __init__.py file {init_file} does not exist"


def test_public_api_imports():
    """The top-level operations are importable from their packages."""
    from audit import empirical_dp_check
    from distributions import normalized_variance
    from estimators import estimate_first_moment, interior_point_main, private_median
    from harness import required_n, run_experiment
    from mechanisms import build_noisy_histogram, tlap_sample

    for fn in (
        empirical_dp_check,
        normalized_variance,
        estimate_first_moment,
        interior_point_main,
        private_median,
        required_n,
        run_experiment,
        build_noisy_histogram,
        tlap_sample,
    ):
        assert callable(fn)


def test_bundled_experiment_configs_validate():
    """Every shipped experiment config parses."""
    from harness import load_configs

    paths = sorted((project_root / "config" / "experiments").glob("*.json"))
    assert paths
    for path in paths:
        json.loads(path.read_text(encoding="utf-8"))
        assert load_configs(path), f"{path.name} holds no experiments"


def test_distribution_ships_every_package():
    """A non-editable install must carry config/ next to the src packages."""
    import pytest

    tomllib = pytest.importorskip("tomllib")
    with open(project_root / "pyproject.toml", "rb") as f:
        setuptools_cfg = tomllib.load(f)["tool"]["setuptools"]

    src_packages = {p.parent.name for p in (project_root / "src").glob("*/__init__.py")}
    assert set(setuptools_cfg["packages"]) == src_packages | {"config"}
    assert setuptools_cfg["package-dir"]["config"] == "config"
    assert (project_root / "config" / "__init__.py").exists()


if __name__ == "__main__":
    import pytest
    pytest.main([__file__, "-v"])
