from typing import Optional
from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    SCENARIO_PATH: str = "scenarios/default.toml"
    OUTPUT_DIR: str = "results"
    LOG_LEVEL: str = "INFO"
    MAX_WORKERS: Optional[int] = None
    VALIDATION_TOLERANCE: float = 0.02
    # None -> 10^6 / λ_I
    VALIDATION_HORIZON: Optional[float] = None
    HOST: str = "0.0.0.0"
    PORT: int = 8000

    class Config:
        env_file = ".env"
        env_prefix = "AOMI_"

settings = Settings()
