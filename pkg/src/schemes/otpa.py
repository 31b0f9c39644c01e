from src.core.results import SchemeOutcome
from src.schemes.base import BaseScheme, TrialContext
from src.services.baselines.otpa import otpa_optimize


class OtpaScheme(BaseScheme):
    """One shared placement for both stages, started from the same initial layout as ``proposed``."""

    name = "otpa"

    def __call__(self, ctx: TrialContext) -> SchemeOutcome:
        result = otpa_optimize(
            ctx.realization.paths_sr,
            ctx.realization.paths_rd,
            ctx.region,
            ctx.params,
            ctx.schedule,
            relaying=ctx.relaying,
            init=ctx.initial_placement(),
            verify=ctx.verify,
        )
        return SchemeOutcome(
            scheme=self.name,
            rate=result.rate,
            placement_rx=result.placement,
            placement_tx=result.placement,
            trace_rx=result.trace,
        )
