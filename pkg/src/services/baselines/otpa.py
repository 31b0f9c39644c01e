"""One-time position adjustment: a single placement serving both relaying stages."""
from abc import abstractmethod

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.core.channel import Placement, PathSet, Region, channel_rd, channel_sr
from src.core.rate import SystemParams, af_beamformer, rate_af, rate_df
from src.services.baselines.selection import Relaying
from src.services.optimizer.base import PlacementObjective
from src.services.optimizer.gain import GainObjective
from src.services.optimizer.pga import PgaSchedule, alternate


class AbstractSharedObjective(PlacementObjective):
    """SNR of both stages evaluated at one shared placement."""

    def __init__(self, paths_sr: PathSet, paths_rd: PathSet, params: SystemParams, wavelength: float = 1.0):
        self.stage_sr = GainObjective(paths_sr, wavelength)
        self.stage_rd = GainObjective(paths_rd, wavelength)
        self.params = params

    def _totals(self, positions: np.ndarray, index: int | None = None, position=None) -> tuple[float, float]:
        if index is None:
            return self.stage_sr.total(positions), self.stage_rd.total(positions)
        return (
            self.stage_sr.antenna_value(index, position, positions),
            self.stage_rd.antenna_value(index, position, positions),
        )

    @abstractmethod
    def snr(self, g1: float, g2: float) -> float:
        ...

    def total(self, positions: np.ndarray) -> float:
        return self.snr(*self._totals(positions))

    def antenna_value(self, index: int, position: np.ndarray, positions: np.ndarray) -> float:
        return self.snr(*self._totals(positions, index, position))

    @abstractmethod
    def snrs(self, g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
        ...

    def antenna_values(self, index: int, candidates: np.ndarray, positions: np.ndarray) -> np.ndarray:
        return self.snrs(
            self.stage_sr.antenna_values(index, candidates, positions),
            self.stage_rd.antenna_values(index, candidates, positions),
        )


class OtpaDfObjective(AbstractSharedObjective):
    """min{P_s‖h₁(x)‖²/σ_r², P_r‖h₂(x)‖²/σ_d²}, ascended along the active branch."""

    name = "otpa_df"

    def snr(self, g1: float, g2: float) -> float:
        return min(self.params.stage_snrs(g1, g2))

    def snrs(self, g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
        return np.minimum(*self.params.stage_snrs(g1, g2))

    def antenna_gradient(self, index: int, position: np.ndarray, positions: np.ndarray) -> np.ndarray:
        s1, s2 = self.params.stage_snrs(*self._totals(positions, index, position))
        # ties go to stage I
        if s1 <= s2:
            scale = self.params.p_source / self.params.noise_relay
            return scale * self.stage_sr.antenna_gradient(index, position, positions)
        scale = self.params.p_relay / self.params.noise_dest
        return scale * self.stage_rd.antenna_gradient(index, position, positions)


class OtpaAfObjective(AbstractSharedObjective):
    """End-to-end AF SNR with the rank-one beamformer, both gains taken at the shared placement."""

    name = "otpa_af"

    def snr(self, g1: float, g2: float) -> float:
        return self.params.af_snr(g1, g2)

    def snrs(self, g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
        return self.params.af_snr(g1, g2)

    def antenna_gradient(self, index: int, position: np.ndarray, positions: np.ndarray) -> np.ndarray:
        d1, d2 = self.params.af_snr_partials(*self._totals(positions, index, position))
        return (
            d1 * self.stage_sr.antenna_gradient(index, position, positions)
            + d2 * self.stage_rd.antenna_gradient(index, position, positions)
        )


class OtpaResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    placement: Placement
    rate: float
    trace: list[float] = Field(default_factory=list)


def otpa_optimize(
    paths_sr: PathSet,
    paths_rd: PathSet,
    region: Region,
    params: SystemParams,
    schedule: PgaSchedule,
    relaying: Relaying,
    init: Placement,
    verify: bool = False,
) -> OtpaResult:
    objective_cls = {"df": OtpaDfObjective, "af": OtpaAfObjective}[relaying]
    objective = objective_cls(paths_sr, paths_rd, params, region.wavelength)
    placement, trace = alternate(objective, init, region, schedule, verify)

    h1 = channel_sr(placement, paths_sr, region.wavelength)
    h2 = channel_rd(placement, paths_rd, region.wavelength)
    if relaying == "df":
        rate = rate_df(h1, h2, params)
    else:
        rate = rate_af(h1, h2, af_beamformer(h1, h2, params).matrix, params)
    return OtpaResult(placement=placement, rate=rate, trace=trace)
