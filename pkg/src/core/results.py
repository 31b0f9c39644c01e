"""Result records passed between the optimizer, the comparison schemes and the campaign runner."""
import math
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.core.channel import Placement
from src.core.rate import AfBeamformer


class OptimizeResult(BaseModel):
    """Output of the two-stage position optimization."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    placement_rx: Placement
    placement_tx: Placement
    gain_rx: float
    gain_tx: float
    rate: float
    trace_rx: list[float] = Field(default_factory=list)
    trace_tx: list[float] = Field(default_factory=list)
    beamformer: AfBeamformer | None = None

    @property
    def objective_trace(self) -> list[float]:
        """Stage I values per AO round followed by stage II values."""
        return [*self.trace_rx, *self.trace_tx]


class GainGrid(BaseModel):
    """Single-antenna channel power gain sampled at cell centers; row i runs along y, column j along x."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    step: float = Field(gt=0)
    origin: tuple[float, float]
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _as_values(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=float, copy=True)
        if arr.ndim != 2:
            raise ValueError(f"grid values must be 2-D, got shape {arr.shape}")
        if np.any(arr < 0):
            raise ValueError("grid values must be non-negative")
        arr.setflags(write=False)
        return arr

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def cell_center(self, row: int, col: int) -> np.ndarray:
        x0, y0 = self.origin
        return np.array([x0 + col * self.step, y0 + row * self.step])

    def to_csv(self, path: str | Path) -> None:
        """One line per grid row, comma-separated gains, no header."""
        pd.DataFrame(self.values).to_csv(path, header=False, index=False, float_format="%.9g")

    @classmethod
    def read_values(cls, path: str | Path) -> np.ndarray:
        return pd.read_csv(path, header=None).to_numpy(dtype=float)


class SchemeOutcome(BaseModel):
    """What one scheme produced on one channel realization."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    scheme: str
    rate: float
    placement_rx: Placement | None = None
    placement_tx: Placement | None = None
    trace_rx: list[float] = Field(default_factory=list)
    trace_tx: list[float] = Field(default_factory=list)

    @field_validator("rate")
    @classmethod
    def _non_negative(cls, v: float) -> float:
        if math.isnan(v) or v < 0:
            raise ValueError(f"rate must be a non-negative number, got {v}")
        return v


class TrialResult(BaseModel):
    """Per-scheme rates of one Monte Carlo trial, in the campaign's scheme order."""

    model_config = ConfigDict(frozen=True)

    sweep_name: str
    sweep_value: float
    trial_index: int = Field(ge=0)
    seed: int
    rates: dict[str, float]

    def rate(self, scheme: str) -> float:
        return self.rates[scheme]
