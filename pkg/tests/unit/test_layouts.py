"""Unit tests for the FPA layout and the selection candidates."""
import numpy as np
import pytest

from src.core.channel import Region
from src.core.errors import InfeasiblePlacementError
from src.services.baselines.layouts import fpa_layout, planar_lattice, selection_candidates


class TestFpaLayout:
    def test_single_antenna_at_origin(self, region):
        np.testing.assert_array_equal(fpa_layout(1, region).positions, [[0.0, 0.0]])

    def test_four_antennas(self, region):
        np.testing.assert_allclose(
            fpa_layout(4, region).positions,
            [[-0.25, -0.25], [0.25, -0.25], [-0.25, 0.25], [0.25, 0.25]],
        )

    def test_six_antennas_truncate_three_by_three(self, region):
        np.testing.assert_allclose(
            fpa_layout(6, region).positions,
            [[-0.5, -0.5], [0.0, -0.5], [0.5, -0.5], [-0.5, 0.0], [0.0, 0.0], [0.5, 0.0]],
        )

    def test_half_wavelength_pitch(self):
        region = Region(side_length=0.4, min_spacing=0.05, wavelength=0.1)
        np.testing.assert_allclose(fpa_layout(4, region).positions, [[-0.025, -0.025], [0.025, -0.025],
                                                                     [-0.025, 0.025], [0.025, 0.025]])

    def test_region_too_small(self):
        with pytest.raises(InfeasiblePlacementError, match="FPA layout"):
            fpa_layout(4, Region(side_length=0.4, min_spacing=0.5))


class TestSelectionCandidates:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 9])
    def test_fpa_is_prefix(self, n):
        region = Region(side_length=10.0, min_spacing=0.5)
        candidates = selection_candidates(n, region)
        assert candidates.num_antennas == 2 * n
        np.testing.assert_array_equal(candidates.positions[:n], fpa_layout(n, region).positions)
        assert candidates.is_feasible(region)

    def test_region_too_small(self):
        with pytest.raises(InfeasiblePlacementError, match="selection candidates"):
            selection_candidates(4, Region(side_length=1.0, min_spacing=0.5))


class TestPlanarLattice:
    def test_row_major_fill(self):
        np.testing.assert_allclose(planar_lattice(3, 2, 1.0), [[-0.5, -0.5], [0.5, -0.5], [-0.5, 0.5]])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            planar_lattice(0, 2, 1.0)
