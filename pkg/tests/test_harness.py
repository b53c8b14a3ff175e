"""
Tests for experiment configs, the trial runner, reports and the CLI.
"""

import io
import json
import math

import pytest
from rich.console import Console

from config.profiles import PAPER_PROFILE, RELAXED_PROFILE, ConstantsProfile
from harness import (
    TRIAL_COLUMNS,
    apply_overrides,
    exceeds_desk_scale,
    parse_configs,
    required_n,
    run_audit,
    run_experiment,
    write_summary_json,
    write_trials_csv,
)
from harness import runner
from harness.cli import EXIT_ACCEPTANCE_FAILED, EXIT_CONFIG_ERROR, EXIT_OK, main
from estimators import InteriorPointDiagnostics, MedianResult, MomentDiagnostics, MomentEstimate
from mechanisms.exceptions import ConfigError, InvalidParameterError
from mechanisms.histogram import NoisyHistogram
from mechanisms.noise import TLapParams

GAUSSIAN_RUN = {
    "experiment_id": "gauss-small",
    "distribution": {"kind": "gaussian"},
    "algorithm": "interior_point",
    "epsilon": 1.0,
    "delta": 1e-6,
    "n": 300_000,
    "trials": 4,
    "base_seed": 77,
    "profile": "relaxed",
}


def quiet_console():
    return Console(file=io.StringIO(), width=200)


# Sample-size formulas

def test_required_n_interior_closed_form():
    """C = e^2 with natural logs: C^3 * sqrt(2) * (1 + 1)."""
    profile = ConstantsProfile(k_prime=1, k_ip=1, k_moment=1, k0=1.0, log_base_two=False)
    c = math.e**2
    n = required_n("interior", c, 1.0, math.exp(-1), math.exp(-1), profile)
    assert abs(n - math.ceil(c**3 * math.sqrt(2.0) * 2.0)) <= 1


def test_required_n_median_picks_dominant_term():
    n = required_n("median", 1.1, 1.0, 0.9, 0.05, RELAXED_PROFILE, alpha=0.1)
    assert n == math.ceil(1.1**2 * math.log(20.0) / 0.01)


def test_required_n_moment_with_paper_constants_exceeds_desk_scale():
    n = required_n("moment", 3.0, 1.0, 1e-6, 0.05, PAPER_PROFILE)
    assert n > 10**7
    assert exceeds_desk_scale(n)
    assert not exceeds_desk_scale(10, cap=10)
    assert exceeds_desk_scale(11, cap=10)


def test_required_n_parameter_checks():
    with pytest.raises(InvalidParameterError):
        required_n("interior", 1.0, 1.0, 1e-6, 0.05, RELAXED_PROFILE)
    with pytest.raises(InvalidParameterError):
        required_n("median", 2.5, 1.0, 1e-6, 0.05, RELAXED_PROFILE)
    with pytest.raises(InvalidParameterError):
        required_n("interior", 2.5, 1.0, 1e-6, 1.5, RELAXED_PROFILE)


# Configs

def test_single_and_suite_documents():
    single = parse_configs(json.dumps(GAUSSIAN_RUN))
    assert len(single) == 1
    suite = parse_configs({"experiments": [GAUSSIAN_RUN, {**GAUSSIAN_RUN, "experiment_id": "b"}]})
    assert [c.experiment_id for c in suite] == ["gauss-small", "b"]
    assert single[0].profile_name == "relaxed"
    assert single[0].budget.epsilon == 1.0


@pytest.mark.parametrize(
    "change, field",
    [
        ({"algorithm": "mean"}, "algorithm"),
        ({"declared_c": 0.9}, "declared_c"),
        ({"epsilon": -1.0}, "epsilon"),
        ({"distribution": {"kind": "cauchy"}}, "distribution"),
        ({"profile": "fast"}, "profile"),
        ({"unexpected": 1}, "unexpected"),
    ],
)
def test_invalid_configs_name_the_field(change, field):
    with pytest.raises(ConfigError) as exc_info:
        parse_configs({**GAUSSIAN_RUN, **change})
    assert exc_info.value.field.startswith(field)
    assert exc_info.value.error_code == "CONFIG_ERROR"


def test_median_requires_alpha():
    with pytest.raises(ConfigError):
        parse_configs({**GAUSSIAN_RUN, "algorithm": "median"})


def test_malformed_json_is_a_config_error():
    with pytest.raises(ConfigError):
        parse_configs("{not json")


def test_overrides_revalidate():
    config = parse_configs(GAUSSIAN_RUN)[0]
    updated = apply_overrides(config, {"trials": 9, "n": None})
    assert updated.trials == 9
    assert updated.n == config.n
    with pytest.raises(ConfigError):
        apply_overrides(config, {"trials": -1})


def test_oracle_c_for_median_uses_middle_band():
    config = parse_configs({**GAUSSIAN_RUN, "algorithm": "median", "alpha": 0.1})[0]
    declared, oracle = config.resolve_c()
    # a slightly peaked band: just above the uniform value 4/3
    assert 4.0 / 3.0 < oracle < 1.35
    assert declared == 2.5


def test_infinite_variance_distribution_is_a_config_error():
    config = parse_configs({**GAUSSIAN_RUN, "distribution": {"kind": "pareto", "a": 2.0}})[0]
    with pytest.raises(ConfigError):
        run_experiment(config)


# Runner and reports

def test_zero_trials_gives_empty_summary():
    config = parse_configs({**GAUSSIAN_RUN, "trials": 0})[0]
    result = run_experiment(config)
    assert result.trials == []
    assert result.summary["success_rate"] is None
    assert result.summary["success_ci"] is None


def test_trials_succeed_and_report_claim1(output_dir):
    config = parse_configs(GAUSSIAN_RUN)[0]
    result = run_experiment(config, workers=1)
    assert [t.trial for t in result.trials] == [0, 1, 2, 3]
    assert all(t.outcome == "point" and t.success for t in result.trials)
    assert all(t.claim1_ok for t in result.trials)
    assert result.summary["success_rate"] == 1.0
    assert result.summary["claim1_violations"] == 0
    low, high = result.summary["success_ci"]
    assert low < 1.0 and high == 1.0


def test_reports_are_byte_identical_across_runs_and_workers(output_dir):
    config = parse_configs(GAUSSIAN_RUN)[0]
    first = write_trials_csv(output_dir / "a.csv", [run_experiment(config, workers=1)])
    second = write_trials_csv(output_dir / "b.csv", [run_experiment(config, workers=1)])
    parallel = write_trials_csv(output_dir / "c.csv", [run_experiment(config, workers=2)])
    assert first.read_bytes() == second.read_bytes() == parallel.read_bytes()

    header = first.read_text(encoding="utf-8").splitlines()[0]
    assert header.split(",") == list(TRIAL_COLUMNS)


def test_wall_time_only_with_explicit_flag(monkeypatch):
    monkeypatch.setenv("DPIP_RECORD_TIMING", "true")
    config = parse_configs({**GAUSSIAN_RUN, "trials": 1})[0]
    assert run_experiment(config, workers=1).trials[0].wall_ms is None
    assert run_experiment(config, workers=1, record_timing=True).trials[0].wall_ms >= 0.0


def test_summary_json_is_sorted(output_dir):
    config = parse_configs({**GAUSSIAN_RUN, "trials": 0})[0]
    path = write_summary_json(output_dir / "summary.json", [run_experiment(config).summary])
    loaded = json.loads(path.read_text(encoding="utf-8"))
    assert loaded[0]["experiment_id"] == "gauss-small"
    assert list(loaded[0]) == sorted(loaded[0])


def test_median_and_moment_trials():
    median = parse_configs({**GAUSSIAN_RUN, "algorithm": "median", "alpha": 0.1, "n": 1_000_000, "trials": 2})[0]
    result = run_experiment(median)
    assert all(t.success for t in result.trials)
    assert all(t.claim1_ok for t in result.trials)
    assert result.summary["claim1_violations"] == 0
    assert result.context.truth_low == pytest.approx(-0.253347, abs=1e-5)

    moment = parse_configs({**GAUSSIAN_RUN, "algorithm": "moment", "trials": 2})[0]
    result = run_experiment(moment)
    assert all(t.success for t in result.trials)
    assert all(math.frexp(t.output_value)[0] == 0.5 for t in result.trials)


def test_median_claim1_covers_moment_stage(monkeypatch):
    """A moment-stage bin without real samples is a violation in median trials too."""
    noise = TLapParams(1.0, 10.0)
    moment = MomentEstimate(
        m_hat=8.0,
        diagnostics=MomentDiagnostics(
            histogram=NoisyHistogram(counts={3: 50.0}, noise=noise),
            threshold=20.0,
            selected=frozenset({3}),
            pairs=10,
            zero_pairs=0,
        ),
    )
    diagnostics = InteriorPointDiagnostics(
        selected=frozenset({0}),
        width=1.0,
        threshold=20.0,
        noisy_counts={0: 40.0},
        true_counts={0: 30},
        moment=moment,
    )
    median = MedianResult(value=0.0, slice_bounds=(-1.0, 1.0), slice_size=30, diagnostics=diagnostics)
    monkeypatch.setattr(runner, "private_median", lambda *args, **kwargs: median)

    config = parse_configs({**GAUSSIAN_RUN, "algorithm": "median", "alpha": 0.1, "n": 1000, "trials": 1})[0]
    report = runner.run_trial(config, runner.build_context(config), 0)
    assert report.success
    assert report.claim1_ok is False


def test_soundness_failures_become_error_outcomes():
    config = parse_configs({**GAUSSIAN_RUN, "n": 1000, "trials": 2})[0]
    result = run_experiment(config)
    assert {t.outcome for t in result.trials} == {"error:SOUNDNESS_ERROR"}
    assert result.summary["error_rate"] == 1.0
    assert result.summary["errors"] == {"error:SOUNDNESS_ERROR": 2}


def test_run_audit_dispatch():
    config = parse_configs(
        {
            "experiment_id": "two-sided",
            "distribution": {"kind": "exponential"},
            "algorithm": "audit:two_sided_mass",
            "n": 2,
            "trials": 0,
        }
    )[0]
    assert config.is_audit
    assert run_audit(config).status == "pass"
    with pytest.raises(ValueError):
        run_experiment(config)


# Command line

def write_config(path, document):
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def test_cli_list_distributions():
    console = quiet_console()
    assert main(["list-distributions"], console=console) == EXIT_OK
    assert "gaussian" in console.file.getvalue()


def test_cli_required_n():
    console = quiet_console()
    code = main(["required-n", "--theorem", "moment", "--C", "3", "--profile", "paper"], console=console)
    assert code == EXIT_OK
    assert "exceeds desk scale" in console.file.getvalue()


def test_cli_run_writes_reports(tmp_path, output_dir):
    path = write_config(tmp_path / "run.json", GAUSSIAN_RUN)
    code = main(["run", str(path), "--output-dir", str(output_dir), "--trials", "2"], console=quiet_console())
    assert code == EXIT_OK
    rows = (output_dir / "trials.csv").read_text(encoding="utf-8").splitlines()
    assert len(rows) == 3
    assert json.loads((output_dir / "summary.json").read_text(encoding="utf-8"))[0]["trials"] == 2
    assert all(row.endswith(",") for row in rows[1:])

    argv = ["run", str(path), "--output-dir", str(output_dir), "--trials", "1", "--record-timing"]
    assert main(argv, console=quiet_console()) == EXIT_OK
    timed = (output_dir / "trials.csv").read_text(encoding="utf-8").splitlines()[1]
    assert float(timed.rsplit(",", 1)[1]) >= 0.0


def test_cli_missed_acceptance_exits_two(tmp_path, output_dir):
    """Constant data gives bottom in every trial."""
    document = {**GAUSSIAN_RUN, "algorithm": "moment", "distribution": {"kind": "point_mass"}, "acceptance_rate": 0.5}
    path = write_config(tmp_path / "run.json", document)
    code = main(["run", str(path), "--output-dir", str(output_dir)], console=quiet_console())
    assert code == EXIT_ACCEPTANCE_FAILED


def test_cli_config_errors_exit_one(tmp_path, output_dir):
    bad = write_config(tmp_path / "bad.json", {**GAUSSIAN_RUN, "algorithm": "nope"})
    assert main(["run", str(bad)], console=quiet_console()) == EXIT_CONFIG_ERROR
    assert main(["run", str(tmp_path / "missing.json")], console=quiet_console()) == EXIT_CONFIG_ERROR
    good = write_config(tmp_path / "good.json", GAUSSIAN_RUN)
    assert main(["run", str(good), "--declared-c", "abc"], console=quiet_console()) == EXIT_CONFIG_ERROR
    assert main(["audit", str(good), "--output-dir", str(output_dir)], console=quiet_console()) == EXIT_CONFIG_ERROR


def test_cli_audit_writes_csv(tmp_path, output_dir):
    document = {
        "experiments": [
            {"experiment_id": "cheb", "distribution": {"kind": "gaussian"}, "algorithm": "audit:chebyshev_interval", "n": 2, "trials": 0, "audit": {"t": 2.0}},
            {"experiment_id": "trim", "distribution": {"kind": "uniform"}, "algorithm": "audit:conditional_boundedness", "n": 2, "trials": 0, "audit": {"k1": 10.0}},
        ]
    }
    path = write_config(tmp_path / "audit.json", document)
    code = main(["audit", str(path), "--output-dir", str(output_dir)], console=quiet_console())
    assert code == EXIT_OK
    lines = (output_dir / "audit.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("experiment_id,check,distribution,status")
    assert ",n/a," in lines[2]
