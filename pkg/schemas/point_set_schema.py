"""Point set schema."""
from typing import Optional, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from schemas.base_schema import BaseSchema


class PointSet(BaseSchema):
    """A realization of node locations in [0, width] x [0, height]."""

    points: np.ndarray = Field(..., description="(n, 2) float array of coordinates")
    density: float = Field(..., ge=0, description="Intensity the set was sampled from")
    window: Tuple[float, float] = Field(..., description="(width, height)")
    seed: Optional[int] = Field(default=None, description="Seed used for sampling, if any")

    @field_validator("points", mode="before")
    @classmethod
    def _as_coordinate_array(cls, value) -> np.ndarray:
        array = np.asarray(value, dtype=float)
        if array.size == 0:
            return np.empty((0, 2), dtype=float)
        if array.ndim != 2 or array.shape[1] != 2:
            raise ValueError(f"points must have shape (n, 2), got {array.shape}")
        return array

    @model_validator(mode="after")
    def _points_in_window(self) -> "PointSet":
        if not self.inside_window():
            x, y = self.points[:, 0], self.points[:, 1]
            outside = ~((x >= 0) & (x <= self.window[0]) & (y >= 0) & (y <= self.window[1]))
            first = self.points[int(np.argmax(outside))]
            raise ValueError(
                f"{int(outside.sum())} point(s) outside the window {self.window}, e.g. ({first[0]}, {first[1]})"
            )
        return self

    @property
    def count(self) -> int:
        return int(self.points.shape[0])

    @property
    def area(self) -> float:
        return self.window[0] * self.window[1]

    def inside_window(self) -> bool:
        """True iff every point lies in the closed window."""
        if self.count == 0:
            return True
        x, y = self.points[:, 0], self.points[:, 1]
        return bool(np.all((x >= 0) & (x <= self.window[0]) & (y >= 0) & (y <= self.window[1])))
