from src.core.results import SchemeOutcome
from src.schemes.base import BaseScheme, TrialContext
from src.services.baselines.layouts import fpa_layout


class FpaScheme(BaseScheme):
    name = "fpa"

    def __call__(self, ctx: TrialContext) -> SchemeOutcome:
        layout = fpa_layout(ctx.params.num_antennas, ctx.region)
        return SchemeOutcome(
            scheme=self.name,
            rate=ctx.rate_at(layout, layout),
            placement_rx=layout,
            placement_tx=layout,
        )
