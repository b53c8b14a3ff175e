"""
Application Configuration Module

This module contains the runtime settings for the estimation library and the
experiment harness. Values come from environment variables (prefix ``DPIP_``)
or an optional ``.env`` file. Only the worker count and logging are read from
the environment; anything that changes report contents comes from the
experiment config or a CLI flag.
"""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="DPIP_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Harness Configuration
    workers: int = Field(default=1, ge=1)

    # Logging Configuration
    log_level: str = Field(default="INFO")
    log_json: bool = Field(default=False)

    @field_validator("log_level")
    @classmethod
    def _normalize_log_level(cls, value: str) -> str:
        level = value.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {value}")
        return level


# Global settings instance
settings = Settings()
