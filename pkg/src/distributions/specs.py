"""
Distribution specifications.

Specs are immutable pydantic models tagged by ``kind`` so that experiment
configs can carry them as plain JSON. They describe a distribution; the
runtime objects that sample from it and evaluate its CDF live in
``distributions.families``.
"""

import math
from typing import Annotated, Any, Dict, Literal, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator


class _SpecBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    def label(self) -> str:
        """Compact one-line description, used as the CSV ``distribution`` column."""
        params = ",".join(
            f"{name}={value:g}" if isinstance(value, float) else f"{name}={value}"
            for name, value in self.model_dump().items()
            if name != "kind"
        )
        return f"{self.kind}({params})"  # type: ignore[attr-defined]


class GaussianSpec(_SpecBase):
    kind: Literal["gaussian"] = "gaussian"
    mu: float = 0.0
    sigma: float = Field(default=1.0, gt=0)


class UniformSpec(_SpecBase):
    kind: Literal["uniform"] = "uniform"
    a: float = 0.0
    b: float = 1.0

    @model_validator(mode="after")
    def _ordered(self) -> "UniformSpec":
        if not self.a < self.b:
            raise ValueError(f"uniform requires a < b, got a={self.a}, b={self.b}")
        return self


class ExponentialSpec(_SpecBase):
    kind: Literal["exponential"] = "exponential"
    rate: float = Field(default=1.0, gt=0)


class TwoPointSpec(_SpecBase):
    """Mass 1 - p at ``a`` and p at ``b``."""

    kind: Literal["two_point"] = "two_point"
    a: float = 0.0
    b: float = 1.0
    p: float = Field(default=0.5, gt=0, lt=1)

    @model_validator(mode="after")
    def _ordered(self) -> "TwoPointSpec":
        if not self.a < self.b:
            raise ValueError(f"two_point requires a < b, got a={self.a}, b={self.b}")
        return self


class ShiftedBernoulliSpec(_SpecBase):
    """shift + Bernoulli(p)."""

    kind: Literal["shifted_bernoulli"] = "shifted_bernoulli"
    p: float = Field(default=0.5, gt=0, lt=1)
    shift: float = 0.0


class PointMassSpec(_SpecBase):
    kind: Literal["point_mass"] = "point_mass"
    value: float = 0.0


class ParetoSpec(_SpecBase):
    """Pareto with scale ``x_m`` and shape ``a``; moments up to order two need a > 2."""

    kind: Literal["pareto"] = "pareto"
    x_m: float = Field(default=1.0, gt=0)
    a: float = Field(default=3.0, gt=0)


class MixtureComponent(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    weight: float = Field(..., gt=0, le=1)
    spec: "DistributionSpec"


class MixtureSpec(_SpecBase):
    kind: Literal["mixture"] = "mixture"
    components: Tuple[MixtureComponent, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _weights_sum_to_one(self) -> "MixtureSpec":
        total = math.fsum(c.weight for c in self.components)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"mixture weights must sum to 1, got {total}")
        return self

    def label(self) -> str:
        parts = "+".join(f"{c.weight:g}*{c.spec.label()}" for c in self.components)
        return f"mixture({parts})"


class ConditionedSpec(_SpecBase):
    """``base`` conditioned to lie between its ``lo_q`` and ``hi_q`` quantiles."""

    kind: Literal["conditioned"] = "conditioned"
    base: "DistributionSpec"
    lo_q: float = Field(..., ge=0, lt=1)
    hi_q: float = Field(..., gt=0, le=1)

    @model_validator(mode="after")
    def _ordered(self) -> "ConditionedSpec":
        if not self.lo_q < self.hi_q:
            raise ValueError(f"conditioned requires lo_q < hi_q, got {self.lo_q}, {self.hi_q}")
        return self

    def label(self) -> str:
        return f"conditioned({self.base.label()},{self.lo_q:g},{self.hi_q:g})"


class HardGadgetSpec(_SpecBase):
    """1/4 mass at -1, 1/4 at +1 and 1/2 on a core supported in [-1/2, 1/2)."""

    kind: Literal["hard_gadget"] = "hard_gadget"
    core: "DistributionSpec"

    def label(self) -> str:
        return f"hard_gadget({self.core.label()})"


DistributionSpec = Annotated[
    Union[
        GaussianSpec,
        UniformSpec,
        ExponentialSpec,
        TwoPointSpec,
        ShiftedBernoulliSpec,
        PointMassSpec,
        ParetoSpec,
        MixtureSpec,
        ConditionedSpec,
        HardGadgetSpec,
    ],
    Field(discriminator="kind"),
]

MixtureComponent.model_rebuild()
MixtureSpec.model_rebuild()
ConditionedSpec.model_rebuild()
HardGadgetSpec.model_rebuild()

_SPEC_ADAPTER: TypeAdapter = TypeAdapter(DistributionSpec)


def parse_spec(data: Union[str, Dict[str, Any], BaseModel]) -> Any:
    """
    Build a spec from a JSON string, a mapping, or an existing spec.

    Raises:
        pydantic.ValidationError: If the data does not describe a valid spec
    """
    if isinstance(data, _SpecBase):
        return data
    if isinstance(data, str):
        return _SPEC_ADAPTER.validate_json(data)
    return _SPEC_ADAPTER.validate_python(data)


def spec_to_json(spec: Any) -> str:
    """Serialize a spec to the JSON form accepted by ``parse_spec``."""
    return _SPEC_ADAPTER.dump_json(spec).decode("utf-8")


def two_mode_mixture(separation: float = 6.0) -> MixtureSpec:
    """Equal mixture of unit gaussians centred at +/- separation / 2."""
    half = separation / 2.0
    return MixtureSpec(
        components=(
            MixtureComponent(weight=0.5, spec=GaussianSpec(mu=-half, sigma=1.0)),
            MixtureComponent(weight=0.5, spec=GaussianSpec(mu=half, sigma=1.0)),
        )
    )


# Named distributions used by the acceptance runs and ``list-distributions``
STANDARD_SUITE: Dict[str, Any] = {
    "gaussian": GaussianSpec(),
    "uniform": UniformSpec(),
    "exponential": ExponentialSpec(),
    "two_point": TwoPointSpec(),
    "two_mode_mixture": two_mode_mixture(),
    "pareto": ParetoSpec(x_m=1.0, a=3.0),
}
