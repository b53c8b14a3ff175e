"""
Tests for logging setup, settings and random stream helpers.
"""

import io
import json
import sys

import numpy as np
import pytest
import structlog
from pydantic import ValidationError

from config.profiles import ConstantsProfile, get_profile
from config.settings import Settings
from utils.logging_config import configure_logging, is_configured
from utils.rng import as_generator, derive_seed, trial_streams


def test_derived_seeds_are_stable_and_distinct():
    assert derive_seed(7, 3) == derive_seed(7, 3)
    seeds = {derive_seed(7, i) for i in range(100)}
    assert len(seeds) == 100
    assert derive_seed(7, 0) != derive_seed(8, 0)


def test_trial_streams_are_independent_and_reproducible():
    data_a, mech_a = trial_streams(123)
    data_b, mech_b = trial_streams(123)
    assert np.array_equal(data_a.random(5), data_b.random(5))
    assert np.array_equal(mech_a.random(5), mech_b.random(5))
    data_c, mech_c = trial_streams(123)
    assert not np.array_equal(data_c.random(5), mech_c.random(5))


def test_as_generator_passes_generators_through():
    generator = np.random.default_rng(1)
    assert as_generator(generator) is generator
    assert isinstance(as_generator(5), np.random.Generator)


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("DPIP_WORKERS", "3")
    monkeypatch.setenv("DPIP_LOG_LEVEL", "debug")
    loaded = Settings()
    assert loaded.workers == 3
    assert loaded.log_level == "DEBUG"
    monkeypatch.setenv("DPIP_LOG_LEVEL", "chatty")
    with pytest.raises(ValidationError):
        Settings()


def test_settings_ignore_report_affecting_variables(monkeypatch):
    monkeypatch.setenv("DPIP_RECORD_TIMING", "true")
    monkeypatch.setenv("DPIP_OUTPUT_DIR", "/tmp/elsewhere")
    monkeypatch.setenv("DPIP_MIN_DECLARED_C", "9")
    loaded = Settings()
    assert set(loaded.model_dump()) == {"workers", "log_level", "log_json"}


def test_configure_logging_json(monkeypatch):
    buffer = io.StringIO()
    monkeypatch.setattr(sys, "stderr", buffer)
    configure_logging("INFO", json_output=True)
    assert is_configured()
    structlog.get_logger("test").info("hello_event", answer=42)
    structlog.get_logger("test").debug("hidden_event")
    monkeypatch.undo()
    configure_logging("WARNING", json_output=False)

    record = json.loads(buffer.getvalue().strip().splitlines()[-1])
    assert record["event"] == "hello_event"
    assert record["answer"] == 42
    assert record["level"] == "info"
    assert "hidden_event" not in buffer.getvalue()


def test_profiles_resolve_by_name_and_mapping():
    assert get_profile("paper").k_prime == 3000
    assert get_profile({"k_prime": 5, "k_ip": 5, "k_moment": 5}).name == "custom"
    with pytest.raises(KeyError):
        get_profile("turbo")
    with pytest.raises(ValidationError):
        ConstantsProfile(name="paper", k_prime=3, k_ip=4, k_moment=6)
