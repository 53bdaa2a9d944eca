"""Uniform grids shared by the wavefunction sampler and the oracle."""

import numpy as np

try:
    from pydantic.v1 import BaseModel, Field, validator
except ImportError:
    from pydantic import BaseModel, Field, validator


class Grid(BaseModel):
    """Uniform grid on [xmin, xmax]."""

    xmin: float
    xmax: float
    points: int = Field(..., ge=3)

    class Config:
        frozen = True

    @validator("xmax")
    def check_order(cls, value, values):
        if "xmin" in values and value <= values["xmin"]:
            raise ValueError(f"xmax={value} must exceed xmin={values['xmin']}")
        return value

    @property
    def spacing(self) -> float:
        return (self.xmax - self.xmin) / (self.points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.points)

    def with_points(self, points: int) -> "Grid":
        return Grid(xmin=self.xmin, xmax=self.xmax, points=points)

    def coarsened(self) -> "Grid":
        """Same interval with twice the spacing."""
        return self.with_points((self.points - 1) // 2 + 1)
