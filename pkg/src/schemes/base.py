from abc import ABC, abstractmethod

from pydantic import BaseModel, ConfigDict

from src.config import CampaignConfig
from src.core.channel import ChannelRealization, Placement, Region, channel_rd, channel_sr
from src.core.rate import SystemParams, af_beamformer, rate_af, rate_df
from src.core.results import SchemeOutcome
from src.services.baselines.layouts import fpa_layout
from src.services.optimizer.pga import PgaSchedule, feasible_init


class TrialContext(BaseModel):
    """Everything a scheme needs to evaluate one channel realization."""

    model_config = ConfigDict(frozen=True)

    config: CampaignConfig
    sweep_value: float
    trial_index: int
    realization: ChannelRealization
    params: SystemParams
    region: Region

    @property
    def relaying(self) -> str:
        return self.config.relaying

    @property
    def schedule(self) -> PgaSchedule:
        return self.config.schedule

    @property
    def verify(self) -> bool:
        return self.config.verify_invariants

    def initial_placement(self) -> Placement:
        mode = self.config.init_mode
        if mode == "fpa":
            placement = fpa_layout(self.params.num_antennas, self.region)
            placement.check_feasible(self.region)
            return placement
        return feasible_init(self.params.num_antennas, self.region, mode, seed=self.realization.seed)

    def rate_at(self, placement_rx: Placement, placement_tx: Placement) -> float:
        """DF rate, or AF rate with the optimal beamformer, for the given placements."""
        lam = self.region.wavelength
        h1 = channel_sr(placement_rx, self.realization.paths_sr, lam)
        h2 = channel_rd(placement_tx, self.realization.paths_rd, lam)
        if self.relaying == "df":
            return rate_df(h1, h2, self.params)
        return rate_af(h1, h2, af_beamformer(h1, h2, self.params).matrix, self.params)


class BaseScheme(ABC):
    """Base class for comparison schemes.

    Subclasses must set `name` as a class variable (str) and implement `__call__`.
    Bounds set ``is_bound = True`` and are excluded from the achievable-rate checks.
    """

    name: str
    is_bound: bool = False

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if not getattr(cls, "name", None) and "Abstract" not in cls.__name__:
            raise TypeError(f"{cls.__name__} must define a 'name' class variable")

    @abstractmethod
    def __call__(self, ctx: TrialContext) -> SchemeOutcome:
        """Evaluate the scheme on ``ctx.realization``."""
        ...
