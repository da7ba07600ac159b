from pathlib import Path
from typing import Dict

from pydantic import field_validator
from pydantic_settings import BaseSettings

DEFAULT_RECURRENCE_TABLE = Path(__file__).resolve().parent.parent / "db" / "recurrences.json"


class Settings(BaseSettings):
    # Logging
    LOG_LEVEL: str = "INFO"

    # Precision policy
    GUARD_DIGITS: int = 30
    MAX_PRECISION_DIGITS: int = 20000

    # Series / quadrature caps
    DIRECT_MAX_TERMS: int = 20000
    EULER_MAX_TERMS: int = 3000
    QUADRATURE_DIGITS: int = 15

    # Prime sieve
    SIEVE_INITIAL_LIMIT: int = 10000

    # Asymptotic checks
    ASYMPTOTIC_N_THM1: int = 200
    ASYMPTOTIC_N_THM2: int = 200
    ASYMPTOTIC_N_THM3: int = 300
    ENVELOPE_WINDOW: int = 10

    # Recurrence transcriptions
    RECURRENCE_TABLE: Path = DEFAULT_RECURRENCE_TABLE

    @field_validator("LOG_LEVEL")
    @classmethod
    def normalize_log_level(cls, value: str) -> str:
        return value.strip().upper()

    @property
    def ASYMPTOTIC_N(self) -> Dict[str, int]:
        """Index at which each theorem's growth and decay are measured"""
        return {
            "thm1": self.ASYMPTOTIC_N_THM1,
            "thm2": self.ASYMPTOTIC_N_THM2,
            "thm3": self.ASYMPTOTIC_N_THM3,
        }

    class Config:
        env_file = ".env"
        env_prefix = "POLYLOG_APERY_"
        extra = "ignore"


settings = Settings()
