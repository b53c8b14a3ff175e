"""
Constants Profiles

The estimators depend on a handful of constants whose analysed values are
very large and were never tuned. A profile bundles them so experiments can switch between the analysed values
and a relaxed set that works at desk-scale sample sizes.
"""

import math
from typing import Dict, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ConstantsProfile(BaseModel):
    """All tunable constants used by the estimators and sample-size formulas."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "custom"
    k_prime: int = Field(..., gt=0)
    k_ip: int = Field(..., gt=0)
    k_moment: int = Field(..., gt=0)
    k0: float = Field(default=1.0, gt=0)
    log_base_two: bool = True
    median_k_factor: float = Field(default=1024.0, gt=0)
    median_c_factor: float = Field(default=64.0, gt=0)
    threshold_on_pairs: bool = True

    @model_validator(mode="after")
    def _check_paper_multiples(self) -> "ConstantsProfile":
        if self.name == "paper" and (
            self.k_ip % self.k_prime or self.k_moment % self.k_prime
        ):
            raise ValueError("paper profile requires k_ip and k_moment to be multiples of k_prime")
        return self

    def log_c(self, c: float) -> float:
        """Evaluate "log C" under this profile's base convention."""
        return math.log2(c) if self.log_base_two else math.log(c)


# Floor for a declared C resolved from the oracle; the mass bounds need C > 2
MIN_DECLARED_C = 2.5

PAPER_PROFILE = ConstantsProfile(
    name="paper",
    k_prime=3000,
    k_ip=4096 * 3000,
    k_moment=8 * 3000,
    k0=1.0,
    median_k_factor=1024.0,
    median_c_factor=64.0,
)

RELAXED_PROFILE = ConstantsProfile(
    name="relaxed",
    k_prime=30,
    k_ip=4 * 30,
    k_moment=8 * 30,
    k0=1.0,
    median_k_factor=16.0,
    median_c_factor=1.0,
)

NAMED_PROFILES: Dict[str, ConstantsProfile] = {
    PAPER_PROFILE.name: PAPER_PROFILE,
    RELAXED_PROFILE.name: RELAXED_PROFILE,
}


def get_profile(profile: Union[str, ConstantsProfile, dict]) -> ConstantsProfile:
    """
    Resolve a profile given by name, as a mapping, or as a model.

    Args:
        profile: "paper", "relaxed", a ConstantsProfile, or a dict of its fields

    Returns:
        The resolved ConstantsProfile

    Raises:
        KeyError: If a profile name is unknown
    """
    if isinstance(profile, ConstantsProfile):
        return profile
    if isinstance(profile, dict):
        return ConstantsProfile(**profile)
    try:
        return NAMED_PROFILES[profile]
    except KeyError:
        known = ", ".join(sorted(NAMED_PROFILES))
        raise KeyError(f"Unknown constants profile '{profile}'. Known: {known}") from None
