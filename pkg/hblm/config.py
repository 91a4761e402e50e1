import os
from functools import lru_cache

from pydantic_settings import BaseSettings

from hblm import __version__


class Settings(BaseSettings):
    # Application
    APP_NAME: str = "hblm"
    VERSION: str = __version__
    LOG_LEVEL: str = "WARNING"

    # Enumeration
    MAX_CANDIDATES: int = 100_000_000
    WORKERS: int | None = None
    LIFT_RESIDUE_FIRST: bool = True

    # Output
    DEFAULT_FORMAT: str = "text"
    ATLAS_DIR: str = "atlas"

    class Config:
        env_prefix = "HBLM_"
        env_file = ".env"
        case_sensitive = True

    def resolved_workers(self) -> int:
        """Worker count with None meaning one per available core."""
        return self.WORKERS or os.cpu_count() or 1


@lru_cache
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
