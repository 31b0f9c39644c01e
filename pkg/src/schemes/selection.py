from src.core.channel import Placement
from src.core.results import SchemeOutcome
from src.schemes.base import BaseScheme, TrialContext
from src.services.baselines.layouts import selection_candidates
from src.services.baselines.selection import antenna_selection


class AntennaSelectionScheme(BaseScheme):
    """Best N of 2N half-wavelength antennas, per stage or shared (``as_shared_subset``)."""

    name = "as"

    def __call__(self, ctx: TrialContext) -> SchemeOutcome:
        candidates = selection_candidates(ctx.params.num_antennas, ctx.region)
        selection = antenna_selection(
            candidates,
            ctx.realization.paths_sr,
            ctx.realization.paths_rd,
            ctx.params,
            relaying=ctx.relaying,
            shared=ctx.config.as_shared_subset,
            wavelength=ctx.region.wavelength,
        )
        return SchemeOutcome(
            scheme=self.name,
            rate=selection.rate,
            placement_rx=Placement(positions=candidates.positions[list(selection.subset_rx)]),
            placement_tx=Placement(positions=candidates.positions[list(selection.subset_tx)]),
        )
