import os
from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_prefix="", extra="ignore")

    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, alias="SPIN_OTTO_THREADS")
    log_level: str = Field(default="INFO", alias="SPIN_OTTO_LOG_LEVEL")
    unitary_steps: int = Field(default=2000, alias="SPIN_OTTO_UNITARY_STEPS")
    ramp_scheme: Literal["magnus4", "midpoint"] = Field(default="magnus4", alias="SPIN_OTTO_RAMP_SCHEME")
    lindblad_dt_scale: float = Field(default=1e-3, alias="SPIN_OTTO_LINDBLAD_DT_SCALE")
    output_dir: Path = Field(default=Path("runs"), alias="SPIN_OTTO_OUTPUT_DIR")

    @field_validator("threads")
    @classmethod
    def _at_least_one(cls, value: int) -> int:
        return max(1, value)

    def integrator_settings(self) -> dict[str, float | int | str]:
        # Recorded in run metadata so a CSV can be traced back to its resolution.
        return {
            "unitary_steps": self.unitary_steps,
            "ramp_scheme": self.ramp_scheme,
            "lindblad_dt_scale": self.lindblad_dt_scale,
        }


@lru_cache
def get_settings() -> Settings:
    return Settings()  # type: ignore[call-arg]
