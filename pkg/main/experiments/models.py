import math
from typing import Dict, List, Literal, Optional, Union

from typing_extensions import Self
from pydantic import BaseModel, Field, field_validator, model_validator

ExperimentKind = Literal[
    "3party-depolarizing",
    "3party-amplitude",
    "4party-depolarizing",
    "4party-amplitude",
    "distance",
    "compare-bilocal",
    "random-study",
]

RecordValue = Union[bool, int, float, str, None]

# Angle at which product sources can exceed the one-relay bound
PRODUCT_STUDY_ANGLE = 0.0


class SweepSpec(BaseModel):
    """
    Everything needed to reproduce one experiment run
    """

    kind: ExperimentKind = Field(description="Which experiment to run")
    grid: int = Field(default=101, ge=2, description="Grid resolution per axis")
    theta: Optional[float] = Field(default=None, description="EJM angle in radians; unset picks the experiment's default")
    alphas: List[float] = Field(default=[0.1, 0.2, 0.3, 0.4, 0.5], description="Channel attenuations for the distance study")
    samples: int = Field(default=100, ge=1, description="Random source pairs to draw")
    seed: int = Field(default=0, ge=0, description="Master seed of the random study")
    ensemble: Literal["product", "ginibre"] = Field(default="product", description="Source ensemble of the random study")
    rank: int = Field(default=2, ge=1, le=4, description="Rank of the sampled two-qubit sources (ginibre ensemble)")
    out: Optional[str] = Field(default=None, description="Report path; nothing is written when unset")
    format: Literal["csv", "json"] = "json"
    fixtures: List[str] = Field(default_factory=list, description="Bundled fixtures added to the random study")

    @field_validator("alphas")
    @classmethod
    def check_alphas(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("At least one alpha is needed")
        for alpha in value:
            if not alpha > 0:
                raise ValueError(f"alpha must be positive, got {alpha}")
        return value

    @model_validator(mode="after")
    def default_angle(self) -> Self:
        if self.theta is None:
            product_study = self.kind == "random-study" and self.ensemble == "product"
            self.theta = PRODUCT_STUDY_ANGLE if product_study else math.pi / 2
        return self


class ExperimentReport(BaseModel):
    """
    One row per grid point or sample, plus the thresholds derived from them
    """

    spec: SweepSpec
    columns: List[str]
    records: List[Dict[str, RecordValue]]
    thresholds: Dict[str, float] = Field(default_factory=dict)
    boundary: Dict[str, List[List[float]]] = Field(default_factory=dict, description="Region boundary polylines")
    contingency: Optional[Dict[str, int]] = None
    duration_seconds: float = 0.0
    version: str = ""
    notes: List[str] = Field(default_factory=list)
