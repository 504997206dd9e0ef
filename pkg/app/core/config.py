"""Configuration settings using Pydantic"""
from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # App
    app_name: str = Field(default="Lagrange-Good Lab")
    environment: str = Field(default="development")
    debug: bool = Field(default=False)

    # Logging
    log_level: str = Field(default="INFO")
    log_json: bool = Field(default=False)

    # Inversion engine
    max_variables: int = Field(default=8, ge=1)
    max_order: int = Field(default=12, ge=0)
    max_exponent: int = Field(default=1000, ge=1)
    verify_workers: int = Field(default=0, ge=0)  # 0 = sequential
    rhs_memo: bool = Field(default=True)

    # Analytic oracle
    oracle_tol: float = Field(default=1e-12, gt=0)
    oracle_max_iter: int = Field(default=10_000, ge=1)
    epsilon_shrink: float = Field(default=0.5, gt=0, lt=1)
    epsilon_max_shrinks: int = Field(default=40, ge=1)
    lipschitz_threshold: float = Field(default=0.9, gt=0)
    singular_det_threshold: float = Field(default=1e-12, gt=0)
    monotone_slack: float = Field(default=1e-10, ge=0)
    slope_slack: float = Field(default=0.5, ge=0)
    partial_sum_radius: float = Field(default=1.0, gt=0)  # radius of convergence assumed by numeric-check
    partial_sum_max_error: Optional[float] = Field(default=None, gt=0)

    # Rate Limiting (HTTP surface)
    rate_limit_verify: str = Field(default="30/minute")
    rate_limit_default: str = Field(default="100/minute")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
