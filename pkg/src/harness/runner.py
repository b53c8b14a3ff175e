"""
Seeded trial execution for experiments and audits.

Each trial derives its own seed from (base_seed, trial index) and splits it
into a data stream and a mechanism stream. Ground truth (sample extremes,
population quantiles, E|X - mu|) is computed outside the mechanism and used
only to score the output.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat
from typing import Any, Dict, List, Optional

import numpy as np
import structlog

from audit import (
    AuditReport,
    check_chebyshev_interval,
    check_conditional_boundedness,
    check_interval_mass,
    check_mean_shift_identity,
    check_q_sandwich,
    check_q_second_moment,
    check_quantile_sandwich,
    check_tail_bound,
    check_two_sided_mass,
    clopper_pearson_interval,
    empirical_dp_check,
    grid_partition,
    noiseless_histogram_argmax,
    replace_entry,
)
from config.settings import settings
from distributions import first_absolute_moment, quantile, sample
from estimators import (
    estimate_first_moment,
    interior_point_main,
    moment_upper_factor,
    private_median,
)
from mechanisms.exceptions import PrivateEstimationError
from utils.rng import derive_seed, trial_streams

from .experiment import ExperimentConfig, check_resolvable

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class TrialContext:
    """Per-experiment quantities shared by all trials."""

    c_declared: float
    c_oracle: float
    truth_low: Optional[float] = None
    truth_high: Optional[float] = None
    record_timing: bool = False


@dataclass(frozen=True)
class TrialReport:
    """
    Outcome of one trial.

    ``outcome`` is "point", "bottom" or "error:<CODE>". ``claim1_ok`` records
    whether every selected bin held at least one true sample.
    """

    trial: int
    seed: int
    outcome: str
    output_value: Optional[float]
    success: bool
    wall_ms: Optional[float] = None
    claim1_ok: Optional[bool] = None


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    context: Optional[TrialContext]
    trials: List[TrialReport] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)


def build_context(config: ExperimentConfig, record_timing: bool = False) -> TrialContext:
    """Resolve C and the ground-truth bounds used for scoring."""
    check_resolvable(config)
    c_declared, c_oracle = config.resolve_c()
    low = high = None
    if config.algorithm == "median":
        assert config.alpha is not None
        low = float(quantile(config.distribution, 0.5 - config.alpha))
        high = float(quantile(config.distribution, 0.5 + config.alpha))
    elif config.algorithm == "moment":
        low = first_absolute_moment(config.distribution)
        high = moment_upper_factor(c_declared, config.constants) * low
    return TrialContext(c_declared, c_oracle, low, high, record_timing)


def _claim1(true_counts: Dict[int, int]) -> bool:
    return all(count > 0 for count in true_counts.values())


def _moment_claim1(moment: Any) -> bool:
    if moment is None or moment.diagnostics is None:
        return True
    hist = moment.diagnostics.histogram
    return _claim1({b: hist.true_count(b) for b in moment.diagnostics.selected})


def run_trial(config: ExperimentConfig, context: TrialContext, index: int) -> TrialReport:
    """Run trial ``index``; mechanism errors become ``error:<CODE>`` outcomes."""
    seed = derive_seed(config.base_seed, index)
    data_rng, mechanism_rng = trial_streams(seed)
    x = sample(config.distribution, config.n, data_rng)
    profile, budget, c = config.constants, config.budget, context.c_declared

    start = time.perf_counter()
    value: Optional[float] = None
    claim1: Optional[bool] = None
    try:
        if config.algorithm == "interior_point":
            result = interior_point_main(x, budget, c, profile, mechanism_rng, diagnostics=True)
            value = result.point
            success = value is not None and float(np.min(x)) <= value <= float(np.max(x))
            if result.diagnostics is not None:
                claim1 = _claim1(result.diagnostics.true_counts) and _moment_claim1(result.diagnostics.moment)
        elif config.algorithm == "median":
            median = private_median(x, budget, config.alpha or 0.0, c, profile, mechanism_rng, diagnostics=True)
            value = median.value
            success = value is not None and context.truth_low <= value <= context.truth_high  # type: ignore[operator]
            if median.diagnostics is not None:
                claim1 = _claim1(median.diagnostics.true_counts) and _moment_claim1(median.diagnostics.moment)
        else:
            estimate = estimate_first_moment(x, budget, c, profile, mechanism_rng, diagnostics=True)
            value = estimate.m_hat
            success = value is not None and context.truth_low <= value <= context.truth_high  # type: ignore[operator]
            if estimate.diagnostics is not None:
                claim1 = _moment_claim1(estimate)
        outcome = "bottom" if value is None else "point"
    except PrivateEstimationError as e:
        logger.debug("trial_error", trial=index, error=e.error_code)
        outcome, value, success = f"error:{e.error_code}", None, False

    wall_ms = (time.perf_counter() - start) * 1000.0 if context.record_timing else None
    return TrialReport(index, seed, outcome, value, bool(success), wall_ms, claim1)


def summarize(config: ExperimentConfig, context: Optional[TrialContext], trials: List[TrialReport]) -> Dict[str, Any]:
    """Success rate with a 95% Clopper-Pearson interval, bottom and error rates."""
    count = len(trials)
    summary: Dict[str, Any] = {
        "experiment_id": config.experiment_id,
        "algorithm": config.algorithm,
        "distribution": config.distribution.label(),
        "n": config.n,
        "trials": count,
        "profile": config.profile_name,
        "C_declared": None if context is None else context.c_declared,
        "C_oracle": None if context is None else context.c_oracle,
    }
    if count == 0:
        summary.update(
            success_rate=None,
            success_ci=None,
            bottom_rate=None,
            error_rate=None,
            errors={},
            claim1_violations=0,
            acceptance_passed=None,
        )
        return summary

    successes = sum(t.success for t in trials)
    errors: Dict[str, int] = {}
    for t in trials:
        if t.outcome.startswith("error:"):
            errors[t.outcome] = errors.get(t.outcome, 0) + 1
    rate = successes / count
    low, high = clopper_pearson_interval(successes, count, 0.95)
    summary.update(
        success_rate=rate,
        success_ci=[low, high],
        bottom_rate=sum(t.outcome == "bottom" for t in trials) / count,
        error_rate=sum(errors.values()) / count,
        errors=dict(sorted(errors.items())),
        claim1_violations=sum(t.claim1_ok is False for t in trials),
        acceptance_passed=None if config.acceptance_rate is None else rate >= config.acceptance_rate,
    )
    return summary


def run_experiment(
    config: ExperimentConfig, workers: Optional[int] = None, record_timing: bool = False
) -> ExperimentResult:
    """
    Run all trials of an estimator experiment.

    Args:
        config: Validated experiment config (not an audit)
        workers: Worker processes; defaults to settings.workers
        record_timing: Fill wall_ms; reports then differ between runs

    Returns:
        ExperimentResult with trials ordered by index and the summary
    """
    if config.is_audit:
        raise ValueError(f"'{config.algorithm}' is an audit; use run_audit")
    workers = settings.workers if workers is None else workers
    if config.trials == 0:
        return ExperimentResult(config, None, [], summarize(config, None, []))

    context = build_context(config, record_timing)
    logger.info(
        "experiment_started",
        experiment=config.experiment_id,
        algorithm=config.algorithm,
        trials=config.trials,
        workers=workers,
        C=context.c_declared,
    )
    indices = range(config.trials)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, config.trials // (4 * workers))
            trials = list(pool.map(run_trial, repeat(config), repeat(context), indices, chunksize=chunk))
    else:
        trials = [run_trial(config, context, i) for i in indices]

    trials.sort(key=lambda t: t.trial)
    summary = summarize(config, context, trials)
    logger.info("experiment_finished", experiment=config.experiment_id, success_rate=summary["success_rate"])
    return ExperimentResult(config, context, trials, summary)


def _dp_audit(config: ExperimentConfig) -> AuditReport:
    params = config.audit
    data_rng, mechanism_rng = trial_streams(derive_seed(config.base_seed, 0))
    x = sample(config.distribution, config.n, data_rng)
    shift = params.grid_width if params.neighbor_shift is None else params.neighbor_shift
    neighbor = replace_entry(x, 0, float(x[0]) + shift)

    if params.mechanism == "noiseless_argmax":
        mechanism = noiseless_histogram_argmax(params.grid_width)
    else:
        c, _ = config.resolve_c()
        budget, profile = config.budget, config.constants
        if params.mechanism == "interior_point":

            def mechanism(data: np.ndarray, rng: np.random.Generator) -> Any:
                return interior_point_main(data, budget, c, profile, rng).point

        else:
            alpha = config.alpha or 0.1

            def mechanism(data: np.ndarray, rng: np.random.Generator) -> Any:
                return private_median(data, budget, alpha, c, profile, rng).value

    return empirical_dp_check(
        mechanism,
        x,
        neighbor,
        grid_partition(params.grid_width),
        config.trials,
        config.budget,
        mechanism_rng,
        name=f"dp[{params.mechanism}]",
    )


def run_audit(config: ExperimentConfig) -> AuditReport:
    """Dispatch an ``audit:*`` config to its check."""
    check, params, spec = config.audit_check, config.audit, config.distribution
    rng = np.random.default_rng(derive_seed(config.base_seed, 0))
    logger.info("audit_started", experiment=config.experiment_id, check=check)
    if check == "dp":
        return _dp_audit(config)
    if check == "q_sandwich":
        return check_q_sandwich(spec, config.trials, rng)
    if check == "q_second_moment":
        return check_q_second_moment(spec, config.trials, rng)
    if check == "tail_bound":
        return check_tail_bound(spec, params.t, config.trials, rng)
    if check == "interval_mass":
        return check_interval_mass(spec, config.constants)
    if check == "two_sided_mass":
        return check_two_sided_mass(spec, max(params.k1, 2.0))
    if check == "conditional_boundedness":
        return check_conditional_boundedness(spec, params.k1, params.k2)
    if check == "mean_shift_identity":
        return check_mean_shift_identity(spec, params.k1)
    if check == "chebyshev_interval":
        return check_chebyshev_interval(spec, params.t)
    assert config.alpha is not None
    return check_quantile_sandwich(spec, config.alpha, params.k, config.n, config.trials, params.beta, rng)
