"""
Configuration and report schemas.

Pydantic models for strategy and step-size configuration, error and slope
reports, and the records of the structured-text model file.
"""

import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .joint import JointKind


# Enums
class InnerStrategy(str, Enum):
    """How the correction terms (dM/dw)(dFD/du) are formed"""
    DTM = "dtm"
    IDFOZA = "idfoza"


class OuterStrategy(str, Enum):
    """How -M^-1 is applied to the pages of the Inner-Term"""
    DTM = "dtm"
    AZA = "aza"


class StrategyConfig(BaseModel):
    """
    Strategy selection for second-order forward-dynamics derivatives.

    A strategy left as None is chosen per model: DTM below the crossover
    body count, the recursive alternative at or above it.
    """
    inner: Optional[InnerStrategy] = Field(None, description="Fixed Inner-Term strategy (auto when unset)")
    outer: Optional[OuterStrategy] = Field(None, description="Fixed Outer-Term strategy (auto when unset)")
    inner_crossover_n: int = Field(40, ge=1, description="N at which the Inner-Term switches to IDFOZA")
    outer_crossover_n: int = Field(100_000, ge=1, description="N at which the Outer-Term switches to AZA")

    model_config = ConfigDict(json_schema_extra={
        "example": {"inner": None, "outer": "dtm", "inner_crossover_n": 40, "outer_crossover_n": 100000}
    })

    def resolve(self, N: int) -> Tuple[InnerStrategy, OuterStrategy]:
        """Concrete (inner, outer) strategies for a model with N bodies"""
        inner = self.inner or (InnerStrategy.DTM if N < self.inner_crossover_n else InnerStrategy.IDFOZA)
        outer = self.outer or (OuterStrategy.DTM if N < self.outer_crossover_n else OuterStrategy.AZA)
        return inner, outer


class StepConfig(BaseModel):
    """Finite-difference step sizes; k defaults to h"""
    h: float = Field(..., gt=0, description="Step along the column variable")
    k: Optional[float] = Field(None, gt=0, description="Step along the page variable (Finite-Diff-1 only)")

    @property
    def steps(self) -> Tuple[float, float]:
        return self.h, self.h if self.k is None else self.k


class ErrorReport(BaseModel):
    """Error metrics of a computed tensor against a reference"""
    mae: float = Field(..., ge=0, description="Maximum absolute error")
    rmsae: float = Field(..., ge=0, description="Root-mean-square absolute error")
    mre: float = Field(..., ge=0, description="Maximum relative error, denominator max(|ref|, 1)")
    rmsre: float = Field(..., ge=0, description="Root-mean-square relative error")
    count: int = Field(..., ge=0, description="Element count used in the RMS denominators")

    @model_validator(mode='after')
    def check_ordering(self):
        """RMS values cannot exceed the maxima they summarise"""
        for rms, peak in (('rmsae', 'mae'), ('rmsre', 'mre')):
            if getattr(self, rms) > getattr(self, peak) * (1 + 1e-12) + 1e-300:
                raise ValueError(f'{rms} ({getattr(self, rms)}) exceeds {peak} ({getattr(self, peak)})')
        return self


class SlopeFit(BaseModel):
    """Least-squares fit log t = A log N + B"""
    A: float = Field(..., description="Slope")
    B: float = Field(..., description="Intercept")
    residual: float = Field(..., ge=0, description="Root-mean-square residual in log space")
    points: int = Field(..., ge=4, description="Number of fitted sizes")

    @field_validator('A', 'B')
    @classmethod
    def validate_finite(cls, v: float):
        if not math.isfinite(v):
            raise ValueError('Fit coefficients must be finite')
        return v


# Model file records
class BodyRecord(BaseModel):
    """One body line of a sorbd-model v1 file"""
    name: str = Field(..., min_length=1)
    parent: str = Field(..., min_length=1, description="Parent body name, or 'root'")
    joint: JointKind
    xyz: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    rpy: Optional[Tuple[float, float, float]] = None
    quat: Optional[Tuple[float, float, float, float]] = Field(None, description="Orientation as (w, x, y, z)")
    mass: float = Field(..., gt=0)
    com: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    inertia: Tuple[float, float, float, float, float, float] = Field(
        ..., description="Rotational inertia about the COM as (ixx, iyy, izz, ixy, ixz, iyz)")
    line: Optional[int] = Field(None, exclude=True)

    @model_validator(mode='after')
    def check_orientation(self):
        if self.rpy is not None and self.quat is not None:
            raise ValueError('give either rpy or quat, not both')
        if self.quat is not None and math.isclose(sum(c * c for c in self.quat), 0.0):
            raise ValueError('quaternion must be non-zero')
        return self


class ModelFileDocument(BaseModel):
    """Parsed sorbd-model v1 document"""
    version: str = "sorbd-model v1"
    gravity: Tuple[float, float, float, float, float, float] = (0.0, 0.0, 0.0, 0.0, 0.0, -9.81)
    bodies: List[BodyRecord] = Field(..., min_length=1)
