"""
Experiment configuration.

A config is a single JSON document holding either one experiment or a list
under ``"experiments"``. Seeds and constants are explicit, so any reported
table can be reproduced from the config alone.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config.profiles import MIN_DECLARED_C, ConstantsProfile, get_profile
from distributions import ConditionedSpec, DistributionSpec, normalized_variance
from mechanisms.exceptions import ConfigError, PrivateEstimationError
from mechanisms.noise import PrivacyBudget

ESTIMATORS = ("interior_point", "median", "moment")
AUDIT_CHECKS = (
    "dp",
    "q_sandwich",
    "q_second_moment",
    "tail_bound",
    "interval_mass",
    "two_sided_mass",
    "conditional_boundedness",
    "mean_shift_identity",
    "chebyshev_interval",
    "quantile_sandwich",
)
AUDIT_PREFIX = "audit:"


class AuditParameters(BaseModel):
    """Knobs for ``audit:*`` experiments; each check reads the ones it needs."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    t: float = Field(default=10.0, gt=0)
    k1: float = Field(default=2.0, gt=1)
    k2: Optional[float] = Field(default=None, gt=1)
    k: float = Field(default=20.0, ge=1)
    beta: float = Field(default=0.1, gt=0, lt=1)
    mechanism: Literal["interior_point", "median", "noiseless_argmax"] = "interior_point"
    grid_width: float = Field(default=0.5, gt=0)
    neighbor_shift: Optional[float] = None


class ExperimentConfig(BaseModel):
    """One experiment: a distribution, an algorithm, its parameters and a seed."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    experiment_id: str = "experiment"
    distribution: DistributionSpec
    algorithm: str
    epsilon: float = Field(default=1.0, gt=0)
    delta: float = Field(default=1e-6, gt=0, lt=1)
    alpha: Optional[float] = Field(default=None, gt=0, lt=0.25)
    declared_c: Union[float, Literal["oracle"]] = "oracle"
    n: int = Field(..., ge=2)
    trials: int = Field(..., ge=0)
    base_seed: int = Field(default=0, ge=0)
    profile: Union[Literal["paper", "relaxed"], ConstantsProfile] = "relaxed"
    acceptance_rate: Optional[float] = Field(default=None, ge=0, le=1)
    audit: AuditParameters = AuditParameters()

    @field_validator("algorithm")
    @classmethod
    def _known_algorithm(cls, value: str) -> str:
        if value in ESTIMATORS:
            return value
        if value.startswith(AUDIT_PREFIX) and value[len(AUDIT_PREFIX):] in AUDIT_CHECKS:
            return value
        known = ", ".join(list(ESTIMATORS) + [AUDIT_PREFIX + c for c in AUDIT_CHECKS])
        raise ValueError(f"unknown algorithm '{value}'; expected one of {known}")

    @field_validator("declared_c")
    @classmethod
    def _c_above_one(cls, value: Union[float, str]) -> Union[float, str]:
        if isinstance(value, float) and not value > 1:
            raise ValueError(f"declared C must exceed 1, got {value}")
        return value

    @model_validator(mode="after")
    def _median_needs_alpha(self) -> "ExperimentConfig":
        if self.algorithm in ("median", "audit:quantile_sandwich") and self.alpha is None:
            raise ValueError(f"algorithm '{self.algorithm}' requires alpha")
        return self

    @property
    def is_audit(self) -> bool:
        return self.algorithm.startswith(AUDIT_PREFIX)

    @property
    def audit_check(self) -> str:
        return self.algorithm[len(AUDIT_PREFIX):]

    @property
    def budget(self) -> PrivacyBudget:
        return PrivacyBudget(self.epsilon, self.delta)

    @property
    def constants(self) -> ConstantsProfile:
        return get_profile(self.profile)

    @property
    def profile_name(self) -> str:
        return self.constants.name

    def bounded_spec(self) -> Any:
        """The law whose normalized variance the algorithm relies on."""
        if self.algorithm == "median":
            assert self.alpha is not None
            return ConditionedSpec(base=self.distribution, lo_q=0.5 - self.alpha, hi_q=0.5 + self.alpha)
        return self.distribution

    def resolve_c(self) -> Tuple[float, float]:
        """
        (declared C passed to the estimator, oracle C of the relevant law).

        "oracle" declares max(C_oracle, MIN_DECLARED_C).
        """
        c_oracle = normalized_variance(self.bounded_spec()).c_value
        if self.declared_c == "oracle":
            return max(c_oracle, MIN_DECLARED_C), c_oracle
        return float(self.declared_c), c_oracle


class ExperimentSuite(BaseModel):
    model_config = ConfigDict(extra="forbid")

    experiments: List[ExperimentConfig] = Field(..., min_length=1)


def _config_error(error: ValidationError) -> ConfigError:
    first = error.errors()[0]
    field = ".".join(str(part) for part in first["loc"])
    return ConfigError(f"{field}: {first['msg']}", field=field)


def parse_configs(document: Union[str, Dict[str, Any]]) -> List[ExperimentConfig]:
    """
    Validate a config document.

    Raises:
        ConfigError: With the dotted path of the first offending field
    """
    try:
        data = json.loads(document) if isinstance(document, str) else document
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from e
    try:
        if isinstance(data, dict) and "experiments" in data:
            return list(ExperimentSuite.model_validate(data).experiments)
        return [ExperimentConfig.model_validate(data)]
    except ValidationError as e:
        raise _config_error(e) from e


def load_configs(path: Union[str, Path]) -> List[ExperimentConfig]:
    """Read and validate a config file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}", field="path")
    return parse_configs(path.read_text(encoding="utf-8"))


def apply_overrides(config: ExperimentConfig, overrides: Dict[str, Any]) -> ExperimentConfig:
    """Return ``config`` with non-None ``overrides`` applied and re-validated."""
    updates = {key: value for key, value in overrides.items() if value is not None}
    if not updates:
        return config
    try:
        return ExperimentConfig.model_validate({**config.model_dump(), **updates})
    except ValidationError as e:
        raise _config_error(e) from e


def check_resolvable(config: ExperimentConfig) -> None:
    """Surface oracle failures (e.g. infinite moments) as config errors."""
    try:
        config.resolve_c()
    except PrivateEstimationError as e:
        raise ConfigError(str(e), field="distribution") from e
