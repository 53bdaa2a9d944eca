"""
Configuration settings for the prepotential toolkit.
"""

from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from dotenv import dotenv_values

try:
    from pydantic.v1 import BaseSettings, Field
except ImportError:
    from pydantic import BaseSettings, Field


class Settings(BaseSettings):
    """Main configuration settings, read from the environment and ``.env``."""

    # Application Settings
    app_name: str = "prepotential"
    app_version: str = "0.1.0"
    debug: bool = Field(default=False, env="DEBUG")
    log_level: str = Field(default="INFO", env="LOG_LEVEL")

    # Output Settings
    output_dir: Optional[str] = Field(default=None, env="PREPOTENTIAL_OUTPUT_DIR")
    default_format: str = Field(default="json", env="PREPOTENTIAL_FORMAT")

    # Verification Settings
    random_seed: int = Field(default=20080930, env="PREPOTENTIAL_SEED")
    equivalence_draws: int = Field(default=20, env="PREPOTENTIAL_DRAWS")
    equivalence_max_level: int = Field(default=10, env="PREPOTENTIAL_MAX_LEVEL")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Config-file keys that differ from the command-line parameter names
CONFIG_ALIASES: Dict[str, str] = {
    "a": "coupling_a",
    "b": "coupling_b",
    "n": "level",
    "format": "output_format",
    "perturb-roots": "perturb_roots",
    "log-level": "log_level",
}


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read command-line defaults from a key = value file or a YAML mapping."""
    path = Path(path)
    if path.suffix.lower() in (".yaml", ".yml"):
        with open(path, "r", encoding="utf-8") as handle:
            raw = yaml.safe_load(handle) or {}
        if not isinstance(raw, dict):
            raise ValueError(f"{path}: expected a mapping at the top level")
    else:
        raw = dotenv_values(path)

    values: Dict[str, Any] = {}
    for key, value in raw.items():
        if value is None or value == "":
            continue
        name = str(key).strip().lower()
        values[CONFIG_ALIASES.get(name, name.replace("-", "_"))] = value
    return values
