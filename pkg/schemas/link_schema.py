"""Link-level schemas: SI statistics, one fading realization, STP results."""
import numpy as np
from pydantic import Field, field_validator, model_validator

from models.enums import Direction
from schemas.base_schema import BaseSchema


class SiGammaParams(BaseSchema):
    """Parameters of the Gamma law of the residual self-interference power."""

    mu: float = Field(..., ge=0, description="Rician mean")
    psi2: float = Field(..., gt=0, description="Scattered-component parameter")
    xi_factor: float = Field(..., description="Antenna-array factor")
    shape: float = Field(..., gt=0, description="Gamma shape kappa")
    scale: float = Field(..., gt=0, description="Gamma scale rho")

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def variance(self) -> float:
        return self.shape * self.scale ** 2


class LinkRealization(BaseSchema):
    """One draw of every random gain that enters a link SINR."""

    desired_gain: float = Field(..., ge=0)
    si_power: float = Field(..., ge=0)
    interferer_gains: np.ndarray
    interferer_path_losses: np.ndarray
    desired_path_loss: float = Field(..., ge=0)
    noise: float = Field(..., ge=0)

    @field_validator("interferer_gains", "interferer_path_losses", mode="before")
    @classmethod
    def _as_vector(cls, value) -> np.ndarray:
        return np.asarray(value, dtype=float).reshape(-1)

    @model_validator(mode="after")
    def _check_lists(self) -> "LinkRealization":
        if self.interferer_gains.shape != self.interferer_path_losses.shape:
            raise ValueError("interferer gains and path losses must have equal length")
        if np.any(self.interferer_gains < 0) or np.any(self.interferer_path_losses < 0):
            raise ValueError("interferer gains and path losses must be nonnegative")
        return self

    @property
    def interference(self) -> float:
        return float(np.dot(self.interferer_gains, self.interferer_path_losses))


class StpEvaluation(BaseSchema):
    """An analytic STP value with its log and the clamp flag."""

    value: float = Field(..., ge=0, le=1)
    log_value: float = Field(..., description="Natural log of the unclamped expression")
    out_of_range: bool = False


class StpEstimate(BaseSchema):
    """Monte-Carlo STP estimate."""

    direction: Direction
    estimate: float = Field(..., ge=0, le=1)
    stderr: float = Field(..., ge=0)
    n: int = Field(..., ge=1)
