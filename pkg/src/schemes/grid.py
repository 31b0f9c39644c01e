from src.core.channel import Placement
from src.core.results import SchemeOutcome
from src.schemes.base import BaseScheme, TrialContext
from src.services.baselines.grid import grid_exhaustive


class GridExhaustiveScheme(BaseScheme):
    """Single-antenna grid search, run separately for the receive and transmit positions."""

    name = "grid_exhaustive"

    def __call__(self, ctx: TrialContext) -> SchemeOutcome:
        if ctx.params.num_antennas != 1:
            raise ValueError(f"grid_exhaustive needs num_antennas = 1, got {ctx.params.num_antennas}")
        step = ctx.config.system.grid_step * ctx.region.wavelength
        best_rx = grid_exhaustive(ctx.realization.paths_sr, ctx.region, step)
        best_tx = grid_exhaustive(ctx.realization.paths_rd, ctx.region, step)
        placement_rx = Placement(positions=best_rx.best_position)
        placement_tx = Placement(positions=best_tx.best_position)
        return SchemeOutcome(
            scheme=self.name,
            rate=ctx.rate_at(placement_rx, placement_tx),
            placement_rx=placement_rx,
            placement_tx=placement_tx,
        )
