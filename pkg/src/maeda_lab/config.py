"""Lab configuration via pydantic-settings BaseSettings."""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Typed settings for environment-driven configuration.

    Every field can be overridden with a ``MAEDA_LAB_``-prefixed environment
    variable, e.g. ``MAEDA_LAB_WORKERS=8``.
    """

    model_config = SettingsConfigDict(env_prefix="MAEDA_LAB_")

    workers: int = Field(default=1, ge=1)
    seed: int = 0
    enclosure_terms: int = Field(default=30, ge=1)
    # bits kept when guaranteed intervals are rounded outward; 0 keeps them exact
    interval_bits: int = Field(default=256, ge=0)
    prime_cap: int = Field(default=2**32, ge=100)
    segment_size: int = Field(default=65536, ge=1024)
    certify_budget: int = Field(default=10**4, ge=2)
    census_cap: int = Field(default=10, ge=1, le=11)
    log_level: str = "WARNING"


settings = Settings()
