"""
Numerical configuration for the root solvers, the wavefunction sampler and
the finite-difference oracle.
"""

from enum import Enum
from typing import Tuple

try:
    from pydantic.v1 import BaseModel, Field
except ImportError:
    from pydantic import BaseModel, Field


class SeedStrategy(str, Enum):
    """How the initial guess for the Newton iteration is built."""
    AUTO = "auto"
    POLYNOMIAL = "polynomial"
    HOMOTOPY = "homotopy"


class Stencil(int, Enum):
    """Finite-difference stencils for the second derivative."""
    THREE_POINT = 3
    FIVE_POINT = 5


class BaeSolverConfig(BaseModel):
    """Damped Newton settings for the Bethe ansatz equations."""

    tolerance: float = 1e-12
    max_iterations: int = 200
    max_halvings: int = 20

    # Degenerate-root guard
    degenerate_distance: float = 1e-12
    degenerate_perturbation: float = 1e-8
    max_degenerate_events: int = 3

    # Homotopy in the level index
    homotopy_offset: float = 0.5

    class Config:
        allow_mutation = False


class OrthopolyConfig(BaseModel):
    """Companion-matrix root finding and polishing."""

    polish_iterations: int = 8
    stieltjes_tolerance: float = 1e-10
    reality_tolerance: float = 1e-10

    class Config:
        allow_mutation = False


class WavefunctionConfig(BaseModel):
    """Sampling and normalization settings."""

    leak_tolerance: float = 1e-8
    decay_exponent: float = 45.0
    rmi_edge_offset: float = 0.05
    singular_edge_fraction: float = 0.02
    default_points: int = 16001

    class Config:
        allow_mutation = False


class OracleSolverConfig(BaseModel):
    """Finite-difference eigensolver settings."""

    max_levels: int = 12
    continuum_margin_factor: float = 10.0
    wall_offset_factor: float = 10.0
    truncation_perturbation: float = 0.25
    tail_decay: float = 20.0
    default_points: int = 16001
    ratio_points: Tuple[int, int, int] = (2001, 4001, 8001)
    singular_xmin: float = Field(default=1e-6, gt=0.0, le=1e-3)

    class Config:
        allow_mutation = False


DEFAULT_BAE_SOLVER = BaeSolverConfig()
DEFAULT_ORTHOPOLY = OrthopolyConfig()
DEFAULT_WAVEFUNCTION = WavefunctionConfig()
DEFAULT_ORACLE = OracleSolverConfig()
