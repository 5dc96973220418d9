"""Solver state schemas for association, PCS threshold search and JAPO."""
from typing import List, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from schemas.base_schema import BaseSchema
from schemas.network_config_schema import NetworkConfig


class AssociationState(BaseSchema):
    """Relaxed association weights xi[AP, STA] with dual multipliers."""

    xi: np.ndarray = Field(..., description="(n_ap, n_sta) weights in [0, 1]")
    delta: float = Field(default=0.0, ge=0)
    eta: float = Field(default=0.0, ge=0)
    step0: float = Field(default=1.0, gt=0)
    iter: int = Field(default=0, ge=0)
    objective: float = 0.0
    converged: bool = False
    trace: Tuple[float, ...] = ()
    multiplier_trace: Tuple[Tuple[float, float], ...] = ()

    @field_validator("xi", mode="before")
    @classmethod
    def _as_matrix(cls, value) -> np.ndarray:
        array = np.asarray(value, dtype=float)
        if array.ndim != 2:
            raise ValueError(f"xi must be a matrix, got shape {array.shape}")
        if array.size and (np.any(array < 0) or np.any(array > 1)):
            raise ValueError("xi entries must lie in [0, 1]")
        return array

    @property
    def assignment(self) -> np.ndarray:
        """AP index per STA (argmax, lowest index on ties)."""
        return np.argmax(self.xi, axis=0)


class NewtonState(BaseSchema):
    """State of the truncated Newton PCS threshold search."""

    gamma_pcs: float = Field(..., gt=0, description="Current threshold in mW")
    grad: float = 0.0
    hess: float = 0.0
    direction: float = 0.0
    step: float = Field(default=1.0, gt=0)
    forcing: float = Field(default=0.5, ge=0, le=0.5)
    iter: int = Field(default=0, ge=0)
    objective: float = 0.0
    log_objective: float = 0.0
    bound: float = Field(default=np.inf, gt=0)
    converged: bool = False
    hit_bound: bool = False
    hit_cap: bool = False
    trace: Tuple[float, ...] = Field(default=(), description="log objective per accepted iterate")


class JapoResult(BaseSchema):
    """Output of the joint association + PCS threshold procedure."""

    xi_star: np.ndarray
    gamma_star: float = Field(..., gt=0)
    sdt_star: float = Field(..., ge=0)
    sdt_fixed: float = Field(..., ge=0, description="Objective at xi_star and the configured threshold")
    log_sdt_star: float
    log_sdt_fixed: float
    association: AssociationState
    newton: NewtonState
    stages: List[str] = Field(default_factory=list)


class AssociationProblem(BaseSchema):
    """
    One AP/STA instance with per-pair rates at a fixed PCS threshold.

    rates[i, j] is the FD rate lambda~_FD * ln(1 + gamma) * P_FD of STA j served
    by AP i; log_rates holds its natural log (finite where the rate underflows).
    """

    cfg: NetworkConfig
    ap_points: np.ndarray
    sta_points: np.ndarray
    path_loss: np.ndarray = Field(..., description="(n_ap, n_sta) pair path losses d^-alpha")
    log_rates: np.ndarray = Field(..., description="(n_ap, n_sta) ln of the pair rates")
    half_duplex: bool = False

    @model_validator(mode="after")
    def _check_shapes(self) -> "AssociationProblem":
        expected = (self.ap_points.shape[0], self.sta_points.shape[0])
        if expected[0] == 0 or expected[1] == 0:
            raise ValueError(f"instance needs at least one AP and one STA, got {expected}")
        for name in ("path_loss", "log_rates"):
            if getattr(self, name).shape != expected:
                raise ValueError(f"{name} must have shape {expected}, got {getattr(self, name).shape}")
        return self

    @property
    def n_ap(self) -> int:
        return int(self.ap_points.shape[0])

    @property
    def n_sta(self) -> int:
        return int(self.sta_points.shape[0])

    @property
    def rates(self) -> np.ndarray:
        return np.exp(self.log_rates)
