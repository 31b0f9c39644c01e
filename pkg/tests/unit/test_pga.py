"""Unit tests for projected gradient ascent and the two-stage drivers."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.bounds import gain_upper_bound, rate_af_upper, rate_df_upper
from src.core.channel import Placement, Region, channel_gain, channel_rd, channel_sr, make_rng, sample_paths
from src.core.errors import InfeasiblePlacementError, InvariantViolation
from src.core.rate import SystemParams, af_beamformer_oracle, rate_df
from src.services.baselines.grid import gain_grid
from src.services.baselines.layouts import fpa_layout
from src.services.optimizer.base import PlacementObjective
from src.services.optimizer.gain import GainObjective, antenna_gains
from src.services.optimizer.pga import (
    PgaSchedule,
    alternate,
    ascend_antenna,
    feasible_init,
    optimize_af,
    optimize_df,
    optimize_stage,
    pga_single,
    project,
    restart_points,
)
from tests.conftest import FAST_SCHEDULE


def _non_decreasing(trace):
    return all(b >= a for a, b in zip(trace, trace[1:]))


class DecreasingObjective(PlacementObjective):
    """Reports a lower total on every call; the AO trace check must catch it."""

    name = "decreasing"

    def __init__(self):
        self.calls = 0

    def total(self, positions):
        self.calls += 1
        return -float(self.calls)

    def antenna_value(self, index, position, positions):
        return 0.0

    def antenna_gradient(self, index, position, positions):
        return np.zeros(2)


class TestSchedule:
    def test_defaults(self):
        schedule = PgaSchedule()
        assert schedule.eta_init == 10.0
        assert schedule.eta_min == 1e-4
        assert schedule.ao_tol == 1e-3
        assert schedule.max_shrinks == 17
        assert schedule.restarts == 4
        assert schedule.scan_step == 1 / 16

    def test_eta_min_below_eta_init(self):
        with pytest.raises(ValueError, match="eta_min"):
            PgaSchedule(eta_init=1.0, eta_min=1.0)

    def test_shrink_in_unit_interval(self):
        with pytest.raises(ValueError):
            PgaSchedule(shrink=1.0)


class TestProject:
    @given(x=st.floats(-100, 100), y=st.floats(-100, 100))
    def test_idempotent_and_inside(self, x, y):
        region = Region(side_length=3.0, min_spacing=0.5)
        p = project((x, y), region)
        assert region.contains(p)
        np.testing.assert_array_equal(project(p, region), p)

    def test_clamps_each_coordinate(self, region):
        np.testing.assert_array_equal(project((5.0, -0.5), region), [2.0, -0.5])


class TestAscendAntenna:
    def test_trace_non_decreasing_and_inside(self, paths5, region):
        positions = fpa_layout(4, region).positions
        position, trace = ascend_antenna(1, positions, GainObjective(paths5), region, FAST_SCHEDULE)
        assert _non_decreasing(trace)
        assert region.contains(position)
        moved = positions.copy()
        moved[1] = position
        assert Placement(positions=moved).is_feasible(region)

    def test_flat_landscape_does_not_move(self, flat_paths, region):
        positions = np.array([[0.2, 0.3]])
        position, trace = ascend_antenna(0, positions, GainObjective(flat_paths), region, FAST_SCHEDULE)
        np.testing.assert_array_equal(position, [0.2, 0.3])
        assert len(trace) == 1

    def test_single_antenna_never_beats_the_grid_by_more_than_a_cell(self):
        region = Region(side_length=2.0, min_spacing=0.5)
        for seed in range(5):
            paths = sample_paths(5, 1.0, seed=seed)
            grid = gain_grid(paths, region, 0.01)
            slack = max(np.abs(np.diff(grid.values, axis=0)).max(), np.abs(np.diff(grid.values, axis=1)).max())
            position = pga_single(0, Placement(positions=[0.0, 0.0]), paths, region, PgaSchedule())
            gain = antenna_gains(position, paths)[0]
            assert gain >= antenna_gains(np.zeros(2), paths)[0]
            assert gain <= grid.values.max() + slack
            assert gain <= gain_upper_bound(paths, 1) + 1e-9


class TestRestarts:
    def test_points_are_feasible_peaks_best_first(self, paths5, region):
        positions = fpa_layout(4, region).positions
        objective = GainObjective(paths5)
        points = restart_points(2, positions, objective, region, FAST_SCHEDULE)
        assert 0 < len(points) <= FAST_SCHEDULE.restarts
        values = [objective.antenna_value(2, p, positions) for p in points]
        assert all(later <= earlier + 1e-9 for earlier, later in zip(values, values[1:]))
        for p in points:
            assert region.contains(p)
            moved = positions.copy()
            moved[2] = p
            assert Placement(positions=moved).is_feasible(region)

    @pytest.mark.parametrize("seed", range(8))
    def test_never_worse_than_a_single_ascent(self, seed):
        region = Region(side_length=4.0, min_spacing=0.5)
        paths = sample_paths(5, 1.0, seed=seed)
        objective = GainObjective(paths)
        positions = np.zeros((1, 2))
        single, single_trace = ascend_antenna(0, positions, objective, region, PgaSchedule(restarts=0))
        best, trace = ascend_antenna(0, positions, objective, region, PgaSchedule())
        assert _non_decreasing(trace)
        assert trace[-1] >= single_trace[-1]
        assert trace[-1] == objective.antenna_value(0, best, positions)

    def test_improves_on_single_ascent_across_seeds(self):
        region = Region(side_length=2.0, min_spacing=0.5)
        positions = np.zeros((1, 2))
        single_ratios, restarted_ratios = [], []
        for seed in range(20):
            paths = sample_paths(5, 1.0, seed=seed)
            grid_max = gain_grid(paths, region, 0.01).values.max()
            single, _ = ascend_antenna(0, positions, GainObjective(paths), region, PgaSchedule(restarts=0))
            restarted, _ = ascend_antenna(0, positions, GainObjective(paths), region, PgaSchedule())
            single_ratios.append(antenna_gains(single, paths)[0] / grid_max)
            restarted_ratios.append(antenna_gains(restarted, paths)[0] / grid_max)
            assert restarted_ratios[-1] >= single_ratios[-1]
        assert np.mean(restarted_ratios) >= 0.97
        assert np.mean(restarted_ratios) > np.mean(single_ratios)

    @pytest.mark.slow
    def test_reaches_grid_maximum_in_most_trials(self):
        region = Region(side_length=2.0, min_spacing=0.5)
        hits = 0
        for seed in range(100):
            paths = sample_paths(5, 1.0, seed=seed)
            grid_max = gain_grid(paths, region, 0.01).values.max()
            position = pga_single(0, Placement(positions=[0.0, 0.0]), paths, region, PgaSchedule())
            hits += antenna_gains(position, paths)[0] >= grid_max * (1 - 1e-3)
        assert hits >= 95


class TestPgaSingle:
    def test_index_out_of_range(self, paths5, region):
        with pytest.raises(IndexError):
            pga_single(3, fpa_layout(2, region), paths5, region, FAST_SCHEDULE)

    def test_infeasible_start(self, paths5, region):
        with pytest.raises(InfeasiblePlacementError):
            pga_single(0, Placement(positions=[[0.0, 0.0], [0.1, 0.0]]), paths5, region, FAST_SCHEDULE)


class TestAlternate:
    @pytest.mark.parametrize("seed", range(5))
    def test_trace_non_decreasing(self, seed, region):
        paths = sample_paths(5, 1.0, seed=seed)
        placement, trace = alternate(GainObjective(paths), fpa_layout(4, region), region, FAST_SCHEDULE, verify=True)
        assert _non_decreasing(trace)
        assert placement.is_feasible(region)
        assert trace[-1] == pytest.approx(channel_gain(placement, paths), rel=1e-12)

    def test_verify_catches_decreasing_objective(self, region):
        with pytest.raises(InvariantViolation, match="decreasing"):
            alternate(DecreasingObjective(), fpa_layout(1, region), region, FAST_SCHEDULE, verify=True)

    def test_rejects_infeasible_init(self, paths5, region):
        with pytest.raises(InfeasiblePlacementError):
            alternate(GainObjective(paths5), Placement(positions=[9.0, 0.0]), region, FAST_SCHEDULE)

    def test_wavelength_scaled_region(self):
        lam = 0.05
        region = Region(side_length=4 * lam, min_spacing=0.5 * lam, wavelength=lam)
        paths = sample_paths(5, 1.0, seed=12)
        placement, trace = optimize_stage(paths, region, FAST_SCHEDULE, fpa_layout(4, region), verify=True)
        assert placement.is_feasible(region)
        assert trace[-1] >= trace[0]


class TestTwoStage:
    def _instance(self, seed):
        rng = make_rng(seed)
        return sample_paths(5, 1.0, rng), sample_paths(5, 1.0, rng)

    @pytest.mark.parametrize("seed", range(4))
    def test_df_at_least_fpa(self, seed, region):
        paths_sr, paths_rd = self._instance(seed)
        params = SystemParams.from_snr_db(4, 10.0)
        init = fpa_layout(4, region)
        result = optimize_df(paths_sr, paths_rd, region, params, FAST_SCHEDULE, init, init, verify=True)
        fpa = rate_df(channel_sr(init, paths_sr), channel_rd(init, paths_rd), params)
        assert result.rate >= fpa - 1e-12
        assert result.rate <= rate_df_upper(paths_sr, paths_rd, params) + 1e-9
        assert result.beamformer is None

    def test_stages_are_independent(self, region):
        paths_sr, paths_rd = self._instance(7)
        params = SystemParams.from_snr_db(3, 10.0)
        init = fpa_layout(3, region)
        result = optimize_df(paths_sr, paths_rd, region, params, FAST_SCHEDULE, init, init)
        rd_first, _ = optimize_stage(paths_rd, region, FAST_SCHEDULE, init)
        sr_second, _ = optimize_stage(paths_sr, region, FAST_SCHEDULE, init)
        assert result.placement_tx == rd_first
        assert result.placement_rx == sr_second

    def test_af_reuses_df_positions(self, region):
        paths_sr, paths_rd = self._instance(8)
        params = SystemParams.from_snr_db(2, 10.0)
        init = fpa_layout(2, region)
        df = optimize_df(paths_sr, paths_rd, region, params, FAST_SCHEDULE, init, init)
        af = optimize_af(paths_sr, paths_rd, region, params, FAST_SCHEDULE, init, init)
        assert af.placement_rx == df.placement_rx
        assert af.placement_tx == df.placement_tx
        assert af.objective_trace == df.objective_trace

    def test_af_matches_oracle_and_bound(self, region):
        paths_sr, paths_rd = self._instance(9)
        params = SystemParams.from_snr_db(2, 10.0)
        init = fpa_layout(2, region)
        result = optimize_af(paths_sr, paths_rd, region, params, FAST_SCHEDULE, init, init)
        h1 = channel_sr(result.placement_rx, paths_sr)
        h2 = channel_rd(result.placement_tx, paths_rd)
        assert result.rate == pytest.approx(af_beamformer_oracle(h1, h2, params).rate, rel=1e-9)
        assert result.rate <= rate_af_upper(paths_sr, paths_rd, params) + 1e-9

    def test_init_must_match_antenna_count(self, region):
        paths_sr, paths_rd = self._instance(1)
        params = SystemParams.from_snr_db(2, 10.0)
        with pytest.raises(InfeasiblePlacementError, match="expected 2"):
            optimize_df(paths_sr, paths_rd, region, params, FAST_SCHEDULE, fpa_layout(1, region), fpa_layout(1, region))


class TestFeasibleInit:
    def test_uniform_grid_is_deterministic(self, region):
        a = feasible_init(4, region)
        assert a == feasible_init(4, region)
        assert a.is_feasible(region)

    def test_uniform_grid_respects_larger_spacing(self):
        region = Region(side_length=4.0, min_spacing=1.0)
        placement = feasible_init(4, region)
        np.testing.assert_allclose(placement.positions, [[-0.5, -0.5], [0.5, -0.5], [-0.5, 0.5], [0.5, 0.5]])

    def test_random_is_seeded_and_feasible(self, region):
        a = feasible_init(5, region, "random", seed=3)
        assert a == feasible_init(5, region, "random", seed=3)
        assert a.is_feasible(region)

    def test_uniform_grid_infeasible(self):
        with pytest.raises(InfeasiblePlacementError):
            feasible_init(9, Region(side_length=0.5, min_spacing=0.5))

    def test_random_gives_up(self):
        with pytest.raises(InfeasiblePlacementError, match="attempts"):
            feasible_init(20, Region(side_length=1.0, min_spacing=0.5), "random", seed=0)

    def test_unknown_mode(self, region):
        with pytest.raises(ValueError, match="Unknown init mode"):
            feasible_init(2, region, "spiral")
