# File: backend/app/config.py
# Purpose: Ambient settings (logging, worker count, default seed) managed with pydantic-settings
from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

APP_VERSION = "1.0.0"


class Settings(BaseSettings):
    """
    Process-level settings read from BIMODAL_* environment variables or a .env file.

    None of these knobs changes a numerical result; run parameters live in RunConfig.
    """
    model_config = SettingsConfigDict(
        env_prefix="BIMODAL_",
        env_file=[".env", "../.env"],
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    APP_NAME: str = "bimodal-sim"
    LOG_LEVEL: str = "WARNING"
    # empty: console (stderr) only
    LOG_DIR: str = ""
    LOG_FORMAT: Literal["json", "console"] = "json"

    MAX_WORKERS: int = Field(1, ge=1)
    DEFAULT_SEED: int = Field(20240917, ge=0, lt=2**64)


@lru_cache
def get_settings() -> Settings:
    """
    Get cached settings instance.
    Uses lru_cache to ensure singleton pattern.
    """
    return Settings()
