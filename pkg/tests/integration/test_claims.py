"""Reduced-scale reproductions of the simulation claims; the full-scale runs live in evals/."""
import pytest

from src.campaign import improvement_table, run_campaign
from src.config import CampaignConfig, SweepConfig, SystemConfig
from tests.conftest import FAST_SCHEDULE

pytestmark = [pytest.mark.integration, pytest.mark.slow]


def _means(summary, value):
    rows = summary[summary["sweep_value"] == value]
    return dict(zip(rows["scheme"], rows["mean_rate_bps_hz"]))


class TestSingleAntennaGap:
    def test_pga_close_to_exhaustive_grid(self):
        config = CampaignConfig(
            relaying="df",
            sweep=SweepConfig(region_size=[2.0, 4.0]),
            system=SystemConfig(num_antennas=1, grid_step=0.02),
            trials=30,
            base_seed=21,
            schemes=["proposed", "grid_exhaustive"],
        )
        result = run_campaign(config, workers=4)
        assert not result.has_errors
        for value in (2.0, 4.0):
            means = _means(result.summary, value)
            assert means["grid_exhaustive"] - means["proposed"] <= 0.2


class TestSchemeOrdering:
    @pytest.mark.parametrize("relaying", ["df", "af"])
    def test_proposed_leads_on_average(self, relaying):
        config = CampaignConfig(
            relaying=relaying,
            sweep=SweepConfig(snr_db=[10.0]),
            system=SystemConfig(num_antennas=2, region_size=4.0),
            schedule=FAST_SCHEDULE,
            trials=30,
            base_seed=22,
            schemes=["proposed", "otpa", "as", "fpa"],
        )
        result = run_campaign(config, workers=4)
        means = _means(result.summary, 10.0)
        assert means["proposed"] >= means["otpa"]
        assert means["proposed"] >= means["as"] >= means["fpa"]
        assert means["otpa"] >= means["fpa"]
        gains = improvement_table(result.summary).set_index("scheme")["improvement_pct"]
        assert gains["fpa"] > 0
