from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.core.bounds import AlphaConvention
from src.core.channel import Region
from src.core.rate import SystemParams
from src.services.optimizer.pga import PgaSchedule

SchemeName = Literal["proposed", "fpa", "as", "otpa", "grid_exhaustive", "bound_deterministic", "bound_aar"]
SweepName = Literal["region_size", "snr_db", "num_antennas"]
InitMode = Literal["fpa", "uniform_grid", "random"]

DEFAULT_SCHEMES: list[SchemeName] = ["proposed", "fpa", "as", "otpa", "bound_deterministic", "bound_aar"]


class AppConfig(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="MA_RELAY_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Campaign execution
    workers: int = Field(default=1, ge=1)

    # Logging
    log_level: str = "INFO"

    # Opik
    tracking_enabled: bool = False
    opik_project: str = "ma-relay"

    @classmethod
    def from_yaml(cls, path: str | Path) -> "AppConfig":
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        return cls(**data)

    @classmethod
    def for_eval(cls) -> "AppConfig":
        """Pre-configured for evaluation: parallel trials, tracked under a separate project."""
        return cls(workers=4, tracking_enabled=True, opik_project="ma-relay-eval")


class SweepConfig(BaseModel):
    """Exactly one axis is swept; the others come from ``system``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    region_size: list[float] | None = None  # A in wavelengths
    snr_db: list[float] | None = None
    num_antennas: list[int] | None = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "SweepConfig":
        given = [name for name in ("region_size", "snr_db", "num_antennas") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(f"sweep must set exactly one of region_size, snr_db, num_antennas (got {given or 'none'})")
        if not getattr(self, given[0]):
            raise ValueError(f"sweep.{given[0]} must not be empty")
        if self.region_size is not None and min(self.region_size) <= 0:
            raise ValueError("sweep.region_size values must be > 0")
        if self.num_antennas is not None and min(self.num_antennas) < 1:
            raise ValueError("sweep.num_antennas values must be >= 1")
        return self

    @property
    def name(self) -> SweepName:
        for name in ("region_size", "snr_db", "num_antennas"):
            if getattr(self, name) is not None:
                return name
        raise AssertionError("unreachable")

    @property
    def values(self) -> list[float]:
        return [float(v) for v in getattr(self, self.name)]


class SystemConfig(BaseModel):
    """Fixed system parameters; lengths in wavelengths, powers linear with σ² = ``noise``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    num_antennas: int = Field(default=1, ge=1)
    snr_db: float = 10.0
    noise: float = Field(default=1.0, gt=0)
    wavelength: float = Field(default=1.0, gt=0)
    region_size: float = Field(default=4.0, gt=0)
    min_spacing: float = Field(default=0.5, gt=0)
    paths_sr: int = Field(default=5, ge=1)
    paths_rd: int = Field(default=5, ge=1)
    rho1_sq: float = Field(default=1.0, gt=0)
    rho2_sq: float = Field(default=1.0, gt=0)
    grid_step: float = Field(default=0.01, gt=0)


class CampaignConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    relaying: Literal["df", "af"] = "df"
    sweep: SweepConfig
    system: SystemConfig = SystemConfig()
    schedule: PgaSchedule = PgaSchedule()
    trials: int = Field(default=100, ge=1)
    base_seed: int = Field(default=0, ge=0)
    schemes: list[SchemeName] = Field(default_factory=lambda: list(DEFAULT_SCHEMES))
    init_mode: InitMode = "fpa"
    as_shared_subset: bool = False
    alpha_convention: AlphaConvention = "small_argument"
    verify_invariants: bool = False

    @field_validator("schemes")
    @classmethod
    def _unique_schemes(cls, v: list[str]) -> list[str]:
        if not v:
            raise ValueError("schemes must name at least one scheme")
        if len(set(v)) != len(v):
            raise ValueError(f"schemes contains duplicates: {v}")
        return v

    @model_validator(mode="after")
    def _grid_search_single_antenna(self) -> "CampaignConfig":
        if "grid_exhaustive" in self.schemes:
            counts = self.sweep.num_antennas if self.sweep.name == "num_antennas" else [self.system.num_antennas]
            if any(n != 1 for n in counts):
                raise ValueError("grid_exhaustive is only permitted with num_antennas = 1")
        return self

    @classmethod
    def from_yaml(cls, path: str | Path) -> "CampaignConfig":
        with open(path) as f:
            data = yaml.safe_load(f)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: expected a mapping at the top level")
        return cls(**data)

    @property
    def sweep_name(self) -> SweepName:
        return self.sweep.name

    def num_antennas_at(self, sweep_value: float) -> int:
        return int(sweep_value) if self.sweep_name == "num_antennas" else self.system.num_antennas

    def params_at(self, sweep_value: float) -> SystemParams:
        snr_db = sweep_value if self.sweep_name == "snr_db" else self.system.snr_db
        return SystemParams.from_snr_db(self.num_antennas_at(sweep_value), snr_db, self.system.noise)

    def region_at(self, sweep_value: float) -> Region:
        lam = self.system.wavelength
        size = sweep_value if self.sweep_name == "region_size" else self.system.region_size
        return Region(side_length=size * lam, min_spacing=self.system.min_spacing * lam, wavelength=lam)
