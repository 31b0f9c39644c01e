from src.core.results import SchemeOutcome
from src.schemes.base import BaseScheme, TrialContext
from src.services.optimizer.pga import optimize_af, optimize_df


class ProposedScheme(BaseScheme):
    """Two-stage movable-antenna optimization (separate receive and transmit placements)."""

    name = "proposed"

    def __call__(self, ctx: TrialContext) -> SchemeOutcome:
        init = ctx.initial_placement()
        optimize = optimize_df if ctx.relaying == "df" else optimize_af
        result = optimize(
            ctx.realization.paths_sr,
            ctx.realization.paths_rd,
            ctx.region,
            ctx.params,
            ctx.schedule,
            init_rx=init,
            init_tx=init,
            verify=ctx.verify,
        )
        return SchemeOutcome(
            scheme=self.name,
            rate=result.rate,
            placement_rx=result.placement_rx,
            placement_tx=result.placement_tx,
            trace_rx=result.trace_rx,
            trace_tx=result.trace_tx,
        )
