from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    app_name: str = Field(default="K-segment Valuation")
    log_level: str = Field(default="INFO")
    output_dir: str = Field(default="runs")
    report_digits: int = Field(default=10, ge=1, le=17)

    class Config:
        env_prefix = "VALUATION_"
        env_file = ".env.local"
        env_file_encoding = "utf-8"


@lru_cache()
def get_settings() -> Settings:
    return Settings()  # type: ignore[arg-type]
