"""
Named parameter presets for the four shape-invariant models.
"""

from typing import Dict, List, Optional

try:
    from pydantic.v1 import BaseModel, Field
except ImportError:
    from pydantic import BaseModel, Field

from ..core.models import ModelKind, ModelParams


class ModelCase(BaseModel):
    """One (model, A, B) point of the verification matrix."""

    name: str
    kind: ModelKind
    A: float
    B: float
    n_max: int = Field(default=3, ge=0)
    description: str = ""

    class Config:
        frozen = True

    @property
    def params(self) -> ModelParams:
        return ModelParams(A=self.A, B=self.B)


# Default preset matrix
DEFAULT_CASES: Dict[str, ModelCase] = {
    "coulomb-1-1": ModelCase(
        name="coulomb-1-1",
        kind=ModelKind.COULOMB,
        A=1.0,
        B=1.0,
        n_max=3,
        description="hydrogen-like ground configuration, E_N = -1/(N+1)^2",
    ),
    "coulomb-2.5-3": ModelCase(
        name="coulomb-2.5-3",
        kind=ModelKind.COULOMB,
        A=2.5,
        B=3.0,
        n_max=3,
        description="Coulomb with a centrifugal barrier",
    ),
    "eckart-2-16": ModelCase(
        name="eckart-2-16",
        kind=ModelKind.ECKART,
        A=2.0,
        B=16.0,
        n_max=1,
        description="Eckart well with two bound states",
    ),
    "rm2-5-3": ModelCase(
        name="rm2-5-3",
        kind=ModelKind.ROSEN_MORSE_II,
        A=5.0,
        B=3.0,
        n_max=3,
        description="hyperbolic Rosen-Morse, asymmetric well",
    ),
    "rm1-1.5-2": ModelCase(
        name="rm1-1.5-2",
        kind=ModelKind.ROSEN_MORSE_I,
        A=1.5,
        B=2.0,
        n_max=3,
        description="trigonometric Rosen-Morse on (0, pi)",
    ),
}


def get_case(name: str) -> Optional[ModelCase]:
    """Get a preset by name."""
    return DEFAULT_CASES.get(name)


def get_cases_by_kind(kind: ModelKind) -> List[ModelCase]:
    """All presets of one model."""
    return [case for case in DEFAULT_CASES.values() if case.kind == kind]
