"""
Machine-readable reports and console tables.

Trial rows follow a fixed column order and every float is written with
``repr`` so identical runs produce identical bytes.
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from rich.console import Console
from rich.table import Table

from audit import AUDIT_COLUMNS, AuditReport

from .runner import ExperimentResult

TRIAL_COLUMNS = (
    "experiment_id",
    "trial",
    "algorithm",
    "distribution",
    "n",
    "epsilon",
    "delta",
    "alpha",
    "C_declared",
    "C_oracle",
    "profile",
    "seed",
    "outcome",
    "output_value",
    "success",
    "wall_ms",
)


def _number(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def trial_rows(result: ExperimentResult) -> List[Dict[str, Any]]:
    """One CSV row per trial, in trial order."""
    config, context = result.config, result.context
    shared = {
        "experiment_id": config.experiment_id,
        "algorithm": config.algorithm,
        "distribution": config.distribution.label(),
        "n": config.n,
        "epsilon": _number(config.epsilon),
        "delta": _number(config.delta),
        "alpha": _number(config.alpha),
        "C_declared": "" if context is None else _number(context.c_declared),
        "C_oracle": "" if context is None else _number(context.c_oracle),
        "profile": config.profile_name,
    }
    return [
        {
            **shared,
            "trial": t.trial,
            "seed": t.seed,
            "outcome": t.outcome,
            "output_value": _number(t.output_value),
            "success": int(t.success),
            "wall_ms": _number(t.wall_ms),
        }
        for t in result.trials
    ]


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> Path:
    """Write rows under a header; missing keys become empty cells."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in columns})
    return path


def write_trials_csv(path: Path, results: Sequence[ExperimentResult]) -> Path:
    rows: List[Dict[str, Any]] = []
    for result in results:
        rows.extend(trial_rows(result))
    return write_csv(path, TRIAL_COLUMNS, rows)


def write_audit_csv(path: Path, reports: Sequence[tuple]) -> Path:
    """``reports`` holds (experiment_id, distribution label, AuditReport) triples."""
    rows = [report.to_row(experiment_id, label) for experiment_id, label, report in reports]
    return write_csv(path, AUDIT_COLUMNS, rows)


def write_summary_json(path: Path, summaries: Sequence[Dict[str, Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(list(summaries), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _rate(value: Optional[float]) -> str:
    return "N/A" if value is None else f"{value:.3f}"


def summary_table(summaries: Sequence[Dict[str, Any]]) -> Table:
    table = Table(title="Experiment summary")
    for column in ("experiment", "algorithm", "distribution", "n", "trials", "success", "95% CI", "bottom", "errors", "claim-1"):
        table.add_column(column)
    for s in summaries:
        ci = s.get("success_ci")
        table.add_row(
            s["experiment_id"],
            s["algorithm"],
            s["distribution"],
            str(s["n"]),
            str(s["trials"]),
            _rate(s.get("success_rate")),
            "N/A" if ci is None else f"[{ci[0]:.3f}, {ci[1]:.3f}]",
            _rate(s.get("bottom_rate")),
            _rate(s.get("error_rate")),
            str(s.get("claim1_violations", 0)),
        )
    return table


def audit_table(reports: Sequence[tuple]) -> Table:
    table = Table(title="Audit results")
    for column in ("experiment", "check", "distribution", "status", "estimate", "bound", "flags"):
        table.add_column(column)
    styles = {"pass": "green", "fail": "bold red", "n/a": "yellow"}
    for experiment_id, label, report in reports:
        assert isinstance(report, AuditReport)
        table.add_row(
            experiment_id,
            report.name,
            label,
            f"[{styles[report.status]}]{report.status}[/]",
            "" if report.estimate is None else f"{report.estimate:.6g}",
            "" if report.bound is None else f"{report.bound:.6g}",
            ",".join(report.flags),
        )
    return table


def print_table(table: Table, console: Optional[Console] = None) -> None:
    (console or Console()).print(table)
