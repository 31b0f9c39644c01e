"""Unit tests for the comparison schemes on one trial context."""
import numpy as np
import pytest

from src.campaign import make_context
from src.config import SweepConfig, SystemConfig
from src.core.bounds import aar_af_upper, aar_df_upper
from src.core.errors import InfeasiblePlacementError
from src.schemes.bounds import AverageBoundScheme, DeterministicBoundScheme
from src.schemes.fpa import FpaScheme
from src.schemes.grid import GridExhaustiveScheme
from src.schemes.otpa import OtpaScheme
from src.schemes.proposed import ProposedScheme
from src.schemes.selection import AntennaSelectionScheme
from src.services.baselines.layouts import fpa_layout, selection_candidates


class TestTrialContext:
    def test_fields(self, campaign_config):
        ctx = make_context(campaign_config(), 4.0, 1)
        assert ctx.region.side_length == 4.0
        assert ctx.params.num_antennas == 2
        assert ctx.realization.paths_sr.num_paths == 3
        assert ctx.relaying == "df"

    @pytest.mark.parametrize("mode", ["fpa", "uniform_grid", "random"])
    def test_initial_placement_is_feasible(self, campaign_config, mode):
        ctx = make_context(campaign_config(init_mode=mode), 4.0, 0)
        placement = ctx.initial_placement()
        assert placement.num_antennas == 2
        assert placement.is_feasible(ctx.region)

    def test_random_init_follows_trial_seed(self, campaign_config):
        config = campaign_config(init_mode="random")
        a = make_context(config, 4.0, 0).initial_placement()
        assert a == make_context(config, 4.0, 0).initial_placement()
        assert a != make_context(config, 4.0, 1).initial_placement()

    def test_fpa_init_rejects_tight_spacing(self, campaign_config):
        config = campaign_config(system=SystemConfig(num_antennas=2, min_spacing=0.8))
        with pytest.raises(InfeasiblePlacementError):
            make_context(config, 4.0, 0).initial_placement()


class TestSchemes:
    @pytest.mark.parametrize("relaying", ["df", "af"])
    def test_ordering_on_one_realization(self, campaign_config, relaying):
        ctx = make_context(campaign_config(relaying=relaying), 4.0, 0)
        fpa = FpaScheme()(ctx)
        proposed = ProposedScheme()(ctx)
        selection = AntennaSelectionScheme()(ctx)
        otpa = OtpaScheme()(ctx)
        bound = DeterministicBoundScheme()(ctx)
        tol = 1e-9
        assert fpa.rate - tol <= proposed.rate <= bound.rate + tol
        assert fpa.rate - tol <= selection.rate <= bound.rate + tol
        assert fpa.rate - tol <= otpa.rate <= bound.rate + tol

    def test_fpa_uses_same_layout_both_stages(self, campaign_config):
        ctx = make_context(campaign_config(), 2.0, 0)
        outcome = FpaScheme()(ctx)
        assert outcome.placement_rx == outcome.placement_tx == fpa_layout(2, ctx.region)
        assert outcome.trace_rx == []

    def test_proposed_records_traces(self, campaign_config):
        outcome = ProposedScheme()(make_context(campaign_config(), 4.0, 0))
        assert len(outcome.trace_rx) >= 2
        assert len(outcome.trace_tx) >= 2
        assert outcome.placement_rx != outcome.placement_tx

    def test_otpa_shares_one_placement(self, campaign_config):
        outcome = OtpaScheme()(make_context(campaign_config(), 4.0, 0))
        assert outcome.placement_rx == outcome.placement_tx
        assert outcome.trace_tx == []

    def test_selection_picks_candidates(self, campaign_config):
        ctx = make_context(campaign_config(as_shared_subset=True), 4.0, 0)
        outcome = AntennaSelectionScheme()(ctx)
        candidates = selection_candidates(2, ctx.region).positions
        for position in outcome.placement_rx.positions:
            assert any(np.array_equal(position, c) for c in candidates)
        assert outcome.placement_rx == outcome.placement_tx

    @pytest.mark.parametrize("relaying, bound", [("df", aar_df_upper), ("af", aar_af_upper)])
    def test_average_bound_same_for_every_trial(self, campaign_config, relaying, bound):
        config = campaign_config(relaying=relaying)
        rates = {AverageBoundScheme()(make_context(config, 4.0, t)).rate for t in range(3)}
        assert len(rates) == 1
        assert rates.pop() == pytest.approx(bound(3, 3, 1.0, 1.0, config.params_at(4.0)))

    def test_average_bound_convention(self, campaign_config):
        ctx = make_context(campaign_config(alpha_convention="as_printed"), 4.0, 0)
        small = make_context(campaign_config(), 4.0, 0)
        assert AverageBoundScheme()(ctx).rate < AverageBoundScheme()(small).rate

    def test_grid_search_single_antenna(self, campaign_config):
        config = campaign_config(
            sweep=SweepConfig(region_size=[1.0]),
            system=SystemConfig(num_antennas=1, paths_sr=3, paths_rd=3, grid_step=0.05),
            schemes=["grid_exhaustive", "proposed"],
        )
        ctx = make_context(config, 1.0, 0)
        grid = GridExhaustiveScheme()(ctx)
        bound = DeterministicBoundScheme()(ctx)
        assert grid.rate <= bound.rate + 1e-9
        assert ctx.region.contains(grid.placement_rx.positions[0])

    def test_grid_search_refuses_arrays(self, campaign_config):
        with pytest.raises(ValueError, match="num_antennas = 1"):
            GridExhaustiveScheme()(make_context(campaign_config(), 4.0, 0))
