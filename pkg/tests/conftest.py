import os

# Disable Opik tracing during tests to avoid sending data and needing API keys
os.environ.setdefault("OPIK_TRACK_DISABLE", "true")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from src.config import CampaignConfig, SweepConfig, SystemConfig  # noqa: E402
from src.core.channel import PathSet, Region, sample_paths  # noqa: E402
from src.services.optimizer.pga import PgaSchedule  # noqa: E402

# Shorter PGA runs; the ascent logic is the same.
FAST_SCHEDULE = PgaSchedule(max_iters=60, max_ao_rounds=20)


@pytest.fixture
def region() -> Region:
    return Region(side_length=4.0, min_spacing=0.5)


@pytest.fixture
def paths5() -> PathSet:
    return sample_paths(5, 1.0, seed=7)


@pytest.fixture
def flat_paths() -> PathSet:
    """A single path with elevation 0: every antenna sees exp(-j2πy)·g."""
    return PathSet(elevations=[0.0], azimuths=[0.0], coefficients=[0.6 + 0.8j])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def campaign_config():
    """Factory for small, fast campaign configs."""

    def make(**overrides) -> CampaignConfig:
        fields = {
            "relaying": "df",
            "sweep": SweepConfig(region_size=[2.0, 4.0]),
            "system": SystemConfig(num_antennas=2, paths_sr=3, paths_rd=3),
            "schedule": FAST_SCHEDULE,
            "trials": 2,
            "base_seed": 11,
            "schemes": ["proposed", "fpa", "as", "otpa", "bound_deterministic", "bound_aar"],
        }
        fields.update(overrides)
        return CampaignConfig(**fields)

    return make
