"""Runtime settings read from the environment and an optional .env file."""
from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

# Load environment variables from .env file
load_dotenv(Path(__file__).parent.parent / '.env')

DEFAULT_SEED = 20240101
DEFAULT_PRIME = 32003
GENERATORS_DIR = Path(__file__).parent / "generators"


class Settings(BaseModel):
    """Process-wide defaults; CLI flags override them per invocation."""

    seed: int = DEFAULT_SEED
    field: str = "q"
    max_degree: int = Field(default=4, ge=1)
    log_level: str = "INFO"
    port: int = 8080
    normalize_slides: bool = True

    @field_validator("field")
    @classmethod
    def _check_field(cls, value: str) -> str:
        value = value.strip().lower()
        if value != "q" and not value.startswith("p:"):
            raise ValueError("field must be 'q' or 'p:<prime>'")
        return value


_settings_instance: Optional[Settings] = None


def _env_flag(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


def get_settings() -> Settings:
    """Get singleton settings instance."""
    global _settings_instance
    if _settings_instance is None:
        _settings_instance = Settings(
            seed=int(os.environ.get("SCHORD_SEED", DEFAULT_SEED)),
            field=os.environ.get("SCHORD_FIELD", "q"),
            max_degree=int(os.environ.get("SCHORD_MAX_DEGREE", 4)),
            log_level=os.environ.get("SCHORD_LOG_LEVEL", "INFO"),
            port=int(os.environ.get("PORT", 8080)),
            normalize_slides=_env_flag("SCHORD_NORMALIZE_SLIDES", True),
        )
    return _settings_instance


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    global _settings_instance
    _settings_instance = None


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(
        level=getattr(logging, (level or get_settings().log_level).upper(), logging.INFO),
        format='%(asctime)s %(levelname)s %(name)s %(message)s',
    )
