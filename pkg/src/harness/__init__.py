"""
Experiment harness module.

Validated experiment configs, seeded trial execution, sample-size formulas,
CSV/JSON reports and the command-line interface.
"""

from .experiment import (
    AUDIT_CHECKS,
    ESTIMATORS,
    AuditParameters,
    ExperimentConfig,
    ExperimentSuite,
    apply_overrides,
    load_configs,
    parse_configs,
)
from .reporting import TRIAL_COLUMNS, trial_rows, write_audit_csv, write_summary_json, write_trials_csv
from .runner import ExperimentResult, TrialContext, TrialReport, run_audit, run_experiment, run_trial
from .sample_size import exceeds_desk_scale, required_n

__all__ = [
    'AUDIT_CHECKS',
    'ESTIMATORS',
    'AuditParameters',
    'ExperimentConfig',
    'ExperimentSuite',
    'apply_overrides',
    'load_configs',
    'parse_configs',
    'TRIAL_COLUMNS',
    'trial_rows',
    'write_audit_csv',
    'write_summary_json',
    'write_trials_csv',
    'ExperimentResult',
    'TrialContext',
    'TrialReport',
    'run_audit',
    'run_experiment',
    'run_trial',
    'exceeds_desk_scale',
    'required_n',
]
