"""Experiment harness schemas."""
from typing import Dict, List, Optional, Tuple

from pydantic import Field, model_validator

from models.enums import MetricKind, Scheme, SweepParameter, ThetaMode
from schemas.base_schema import BaseSchema
from schemas.network_config_schema import NetworkConfig


class Scenario(BaseSchema):
    """One experiment family: a base config, a sweep, schemes and metrics."""

    name: str = Field(..., min_length=1)
    description: str = ""
    base: NetworkConfig
    sweep_param: SweepParameter
    sweep_values: Tuple[float, ...] = Field(..., min_length=1)
    schemes: Tuple[Scheme, ...] = Field(..., min_length=1)
    metrics: Tuple[MetricKind, ...] = (MetricKind.CAP, MetricKind.STP, MetricKind.SDT)
    variants: Dict[str, Dict[str, float]] = Field(
        default_factory=dict,
        description="Named fixed overrides (config units) crossed with the sweep",
    )
    n_realizations: int = Field(..., ge=1)
    base_seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_variants(self) -> "Scenario":
        for label in self.variants:
            if "|" in label or "," in label:
                raise ValueError(f"variant label may not contain '|' or ',': {label!r}")
        return self

    def variant_items(self) -> List[Tuple[Optional[str], Dict[str, float]]]:
        """(label, overrides) pairs; a single unlabeled entry when there are no variants."""
        if not self.variants:
            return [(None, {})]
        return [(label, dict(overrides)) for label, overrides in self.variants.items()]


class RealizationRecord(BaseSchema):
    """Metrics of one scheme on one realization."""

    index: int = Field(..., ge=0)
    seed: int = Field(..., ge=0)
    scheme: Scheme
    cap: float
    stp: float
    sdt: float
    gamma_pcs: float = Field(..., gt=0)
    error_id: Optional[str] = Field(default=None, description="Set when the realization failed")

    @property
    def failed(self) -> bool:
        return self.error_id is not None

    def metric(self, kind: MetricKind) -> float:
        return {MetricKind.CAP: self.cap, MetricKind.STP: self.stp, MetricKind.SDT: self.sdt}[kind]


class ExperimentRow(BaseSchema):
    """One CSV row."""

    sweep_param: str
    sweep_value: float
    scheme: str
    metric: MetricKind
    mean: float
    stderr: Optional[float] = None
    n: int = Field(..., ge=0)


class ExperimentResult(BaseSchema):
    """Averaged metric curves of a scenario."""

    scenario: str
    theta_mode: ThetaMode = ThetaMode.NUMERIC
    rows: Tuple[ExperimentRow, ...] = ()
    n_realizations: int = 0
    base_seed: int = 0
    failures: int = 0
    error_ids: Tuple[str, ...] = ()

    def row(self, sweep_value: float, scheme: str, metric: MetricKind) -> ExperimentRow:
        for candidate in self.rows:
            if candidate.sweep_value == sweep_value and candidate.scheme == scheme \
                    and candidate.metric == metric:
                return candidate
        raise KeyError(f"no row for ({sweep_value}, {scheme}, {metric.value})")


class SchemeGain(BaseSchema):
    """Percentage gain of JAPO over one baseline at one sweep point."""

    variant: Optional[str] = None
    sweep_value: float
    baseline: Scheme
    japo: float
    baseline_value: float
    gain_pct: float
