"""Application settings and configuration."""

from typing import Optional
from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Solver and verifier settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="FT_",
        env_file=".env",
        case_sensitive=False,
        populate_by_name=True,
        extra="ignore",
    )

    # Logging Configuration
    log_level: str = Field(default="INFO", validation_alias=AliasChoices("FT_LOG", "FT_LOG_LEVEL", "log_level"))
    log_file: Optional[str] = Field(default=None)
    output_dir: str = Field(default="./output")

    # Tracker Configuration
    event_tolerance: float = Field(default=1e-11, gt=0)
    max_events: int = Field(default=200_000, gt=0)
    sup_norm_t_samples: int = Field(default=64, gt=0)

    # Verification Configuration
    quadrature_order: int = Field(default=6, ge=2)
    quadrature_tolerance: float = Field(default=1e-7, gt=0)
    quadrature_budget: int = Field(default=200_000, gt=0)
    bound_slack: float = Field(default=1e-9, ge=0)
    admissibility_tolerance: float = Field(default=1e-12, ge=0)
    lipschitz_grid_points: int = Field(default=50, ge=2)

    # Performance Configuration
    worker_threads: int = Field(default=4, gt=0)

    def event_tau(self, horizon: float) -> float:
        """Event merging tolerance for a run on [0, horizon]."""
        return self.event_tolerance * max(1.0, horizon)


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the global settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None
