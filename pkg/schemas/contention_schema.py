"""Schemas for the CSMA/CA contention model and its thinning oracle."""
from typing import Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from schemas.base_schema import BaseSchema
from schemas.point_set_schema import PointSet


class ThinningInput(BaseSchema):
    """Points with contention marks and a hard carrier-sense radius."""

    points: PointSet
    marks: np.ndarray = Field(..., description="One mark in [0, 1] per point")
    cs_range: float = Field(..., gt=0, description="Carrier-sense radius R")

    @field_validator("marks", mode="before")
    @classmethod
    def _as_mark_array(cls, value) -> np.ndarray:
        return np.asarray(value, dtype=float).reshape(-1)

    @model_validator(mode="after")
    def _check_marks(self) -> "ThinningInput":
        if self.marks.shape[0] != self.points.count:
            raise ValueError(
                f"marks length {self.marks.shape[0]} does not match point count {self.points.count}"
            )
        if self.marks.size and (np.any(self.marks < 0) or np.any(self.marks > 1)):
            raise ValueError("marks must lie in [0, 1]")
        return self


class ThinningResult(BaseSchema):
    """Retained points of a Matérn type-II thinning."""

    retained: np.ndarray = Field(..., description="Sorted indices of retained points")
    empirical_p: float = Field(..., ge=0, le=1, description="|retained| / |points|")
    interior_count: int = Field(default=0, ge=0, description="Points at least R from the boundary")
    interior_retained: int = Field(default=0, ge=0)

    @property
    def interior_p(self) -> Optional[float]:
        """Retention among interior points, None when there are none."""
        if self.interior_count == 0:
            return None
        return self.interior_retained / self.interior_count


class ContentionSummary(BaseSchema):
    """Theta, access probability and active density of one contending process."""

    theta: float = Field(..., ge=0)
    access_p: float = Field(..., gt=0, le=1)
    active_density: float = Field(..., ge=0)
    parent_density: float = Field(..., gt=0)


class RetentionEstimate(BaseSchema):
    """Monte-Carlo retention probability with its standard error."""

    estimate: float
    stderr: float
    realizations: int
    interior_points: int
    analytic: float

    @property
    def relative_error(self) -> float:
        return abs(self.estimate - self.analytic) / self.analytic
