"""
Command-line interface for the experiment harness.

Verbs:
    run <config.json>         run estimator experiments, write trials.csv and summary.json
    audit <config.json>       run audit:* checks, write audit.csv
    required-n <flags>        evaluate a sample-size formula
    list-distributions        show the named distribution suite

Exit codes: 0 on completion, 1 on a configuration error, 2 when an
acceptance threshold or an audit fails.
"""

import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import structlog
from rich.console import Console
from rich.table import Table

from config.profiles import get_profile
from config.settings import settings
from distributions import STANDARD_SUITE, normalized_variance
from mechanisms.exceptions import ConfigError, PrivateEstimationError
from utils.logging_config import configure_logging

from .experiment import ExperimentConfig, apply_overrides, load_configs
from .reporting import (
    audit_table,
    print_table,
    summary_table,
    write_audit_csv,
    write_summary_json,
    write_trials_csv,
)
from .runner import run_audit, run_experiment
from .sample_size import exceeds_desk_scale, required_n

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_ACCEPTANCE_FAILED = 2

DEFAULT_OUTPUT_DIR = Path("results")


def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", type=Path, help="Experiment config (JSON)")
    parser.add_argument("--trials", type=int, help="Override trials")
    parser.add_argument("--n", type=int, help="Override sample size")
    parser.add_argument("--seed", type=int, dest="base_seed", help="Override base seed")
    parser.add_argument("--epsilon", type=float, help="Override epsilon")
    parser.add_argument("--delta", type=float, help="Override delta")
    parser.add_argument("--alpha", type=float, help="Override alpha")
    parser.add_argument("--declared-c", dest="declared_c", help='Override declared C (number or "oracle")')
    parser.add_argument("--profile", choices=["paper", "relaxed"], help="Override constants profile")
    parser.add_argument("--output-dir", type=Path, default=DEFAULT_OUTPUT_DIR, help="Directory for reports")
    parser.add_argument("--workers", type=int, help="Worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpip",
        description="Private interior point and approximate median experiments",
    )
    parser.add_argument("--log-level", default=None, help="Logging level")
    parser.add_argument("--log-json", action="store_true", help="Emit JSON logs")
    verbs = parser.add_subparsers(dest="verb", required=True)

    run = verbs.add_parser("run", help="Run estimator experiments")
    _add_override_flags(run)
    run.add_argument("--record-timing", action="store_true", help="Fill the wall_ms column (not reproducible)")
    _add_override_flags(verbs.add_parser("audit", help="Run audit checks"))

    sizes = verbs.add_parser("required-n", help="Evaluate a sample-size formula")
    sizes.add_argument("--theorem", choices=["interior", "median", "moment"], required=True)
    sizes.add_argument("--C", dest="c", type=float, required=True)
    sizes.add_argument("--epsilon", type=float, default=1.0)
    sizes.add_argument("--delta", type=float, default=1e-6)
    sizes.add_argument("--beta", type=float, default=0.05)
    sizes.add_argument("--alpha", type=float, default=None)
    sizes.add_argument("--profile", choices=["paper", "relaxed"], default="relaxed")

    verbs.add_parser("list-distributions", help="Show the named distribution suite")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    declared: Any = args.declared_c
    if declared is not None and declared != "oracle":
        try:
            declared = float(declared)
        except ValueError:
            raise ConfigError(f"--declared-c must be a number or 'oracle', got {declared}", field="declared_c")
    return {
        "trials": args.trials,
        "n": args.n,
        "base_seed": args.base_seed,
        "epsilon": args.epsilon,
        "delta": args.delta,
        "alpha": args.alpha,
        "declared_c": declared,
        "profile": args.profile,
    }


def _load(args: argparse.Namespace) -> List[ExperimentConfig]:
    overrides = _overrides(args)
    return [apply_overrides(config, overrides) for config in load_configs(args.config)]


def cmd_run(args: argparse.Namespace, console: Console) -> int:
    configs = _load(args)
    estimators = [c for c in configs if not c.is_audit]
    if not estimators:
        raise ConfigError("no estimator experiments in config; use the audit verb", field="algorithm")
    output_dir = args.output_dir

    results = [
        run_experiment(config, workers=args.workers, record_timing=args.record_timing) for config in estimators
    ]
    summaries = [r.summary for r in results]
    trials_path = write_trials_csv(output_dir / "trials.csv", results)
    summary_path = write_summary_json(output_dir / "summary.json", summaries)
    print_table(summary_table(summaries), console)
    console.print(f"Wrote {trials_path} and {summary_path}")

    failed = [s["experiment_id"] for s in summaries if s.get("acceptance_passed") is False]
    if failed:
        console.print(f"[bold red]Acceptance threshold missed:[/] {', '.join(failed)}")
        return EXIT_ACCEPTANCE_FAILED
    return EXIT_OK


def cmd_audit(args: argparse.Namespace, console: Console) -> int:
    configs = [c for c in _load(args) if c.is_audit]
    if not configs:
        raise ConfigError("no audit:* experiments in config", field="algorithm")
    output_dir = args.output_dir

    reports = [(c.experiment_id, c.distribution.label(), run_audit(c)) for c in configs]
    path = write_audit_csv(output_dir / "audit.csv", reports)
    print_table(audit_table(reports), console)
    console.print(f"Wrote {path}")
    return EXIT_OK if all(r.passed for _, _, r in reports) else EXIT_ACCEPTANCE_FAILED


def cmd_required_n(args: argparse.Namespace, console: Console) -> int:
    n = required_n(args.theorem, args.c, args.epsilon, args.delta, args.beta, get_profile(args.profile), args.alpha)
    note = " [yellow](exceeds desk scale)[/]" if exceeds_desk_scale(n) else ""
    console.print(f"required n ({args.theorem}, {args.profile} profile): {n}{note}")
    return EXIT_OK


def cmd_list_distributions(args: argparse.Namespace, console: Console) -> int:
    table = Table(title="Distribution suite")
    table.add_column("name")
    table.add_column("spec")
    table.add_column("C")
    table.add_column("method")
    for name, spec in STANDARD_SUITE.items():
        report = normalized_variance(spec)
        table.add_row(name, spec.label(), f"{report.c_value:.6g}", report.method)
    print_table(table, console)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "audit": cmd_audit,
    "required-n": cmd_required_n,
    "list-distributions": cmd_list_distributions,
}


def main(argv: Optional[Sequence[str]] = None, console: Optional[Console] = None) -> int:
    """Parse ``argv``, dispatch the verb and return the exit code."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or settings.log_level, json_output=args.log_json or settings.log_json)
    console = console or Console()
    try:
        return COMMANDS[args.verb](args, console)
    except ConfigError as e:
        logger.error("config_error", field=e.field, error=e.message)
        console.print(f"[bold red]Configuration error:[/] {e}")
        return EXIT_CONFIG_ERROR
    except PrivateEstimationError as e:
        logger.error("invalid_parameters", error=str(e))
        console.print(f"[bold red]Error:[/] {e}")
        return EXIT_CONFIG_ERROR
