from .model_config import DEFAULT_CASES, ModelCase, get_case, get_cases_by_kind
from .settings import Settings, get_settings, load_config_file
from .solver_config import (
    BaeSolverConfig,
    OracleSolverConfig,
    OrthopolyConfig,
    SeedStrategy,
    Stencil,
    WavefunctionConfig,
)

__all__ = [
    "DEFAULT_CASES",
    "ModelCase",
    "get_case",
    "get_cases_by_kind",
    "Settings",
    "get_settings",
    "load_config_file",
    "BaeSolverConfig",
    "OracleSolverConfig",
    "OrthopolyConfig",
    "SeedStrategy",
    "Stencil",
    "WavefunctionConfig",
]
