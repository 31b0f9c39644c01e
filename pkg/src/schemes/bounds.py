from src.core.bounds import aar_af_upper, aar_df_upper, rate_af_upper, rate_df_upper
from src.core.results import SchemeOutcome
from src.schemes.base import BaseScheme, TrialContext


class DeterministicBoundScheme(BaseScheme):
    """Per-realization bound with every antenna at a fully coherent position."""

    name = "bound_deterministic"
    is_bound = True

    def __call__(self, ctx: TrialContext) -> SchemeOutcome:
        bound = rate_df_upper if ctx.relaying == "df" else rate_af_upper
        return SchemeOutcome(
            scheme=self.name,
            rate=bound(ctx.realization.paths_sr, ctx.realization.paths_rd, ctx.params),
        )


class AverageBoundScheme(BaseScheme):
    """Closed-form bound on the average rate; identical for every trial of a sweep value."""

    name = "bound_aar"
    is_bound = True

    def __call__(self, ctx: TrialContext) -> SchemeOutcome:
        system = ctx.config.system
        args = (system.paths_sr, system.paths_rd, system.rho1_sq, system.rho2_sq, ctx.params)
        if ctx.relaying == "df":
            rate = aar_df_upper(*args, convention=ctx.config.alpha_convention)
        else:
            rate = aar_af_upper(*args)
        return SchemeOutcome(scheme=self.name, rate=rate)
