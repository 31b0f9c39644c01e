"""Fixed antenna layouts: the FPA planar array and the candidate set for antenna selection."""
import math

import numpy as np

from src.core.channel import Placement, Region
from src.core.errors import InfeasiblePlacementError


def planar_lattice(count: int, columns: int, pitch: float) -> np.ndarray:
    """First ``count`` points of a ``columns``-wide lattice, filled row-major.

    The lattice is centered on a columns×columns square around the origin:
    x = (col - (c-1)/2)·pitch, y = (row - (c-1)/2)·pitch. Rows past the square
    continue with the same pitch.
    """
    if count < 1 or columns < 1:
        raise ValueError(f"count and columns must be >= 1, got {count} and {columns}")
    idx = np.arange(count)
    row, col = np.divmod(idx, columns)
    offset = (columns - 1) / 2
    return np.column_stack([(col - offset) * pitch, (row - offset) * pitch])


def _fit(points: np.ndarray, region: Region, what: str) -> Placement:
    placement = Placement(positions=points)
    outside = [n for n, p in enumerate(placement.positions) if not region.contains(p)]
    if outside:
        raise InfeasiblePlacementError(
            f"{what} needs a region wider than {region.side_length:.6g}; antennas {outside} fall outside"
        )
    return placement


def fpa_layout(num_antennas: int, region: Region) -> Placement:
    """⌈√N⌉×⌈√N⌉ half-wavelength array centered at the origin, truncated to N antennas."""
    columns = math.ceil(math.sqrt(num_antennas))
    lattice = planar_lattice(num_antennas, columns, region.wavelength / 2)
    return _fit(lattice, region, f"FPA layout for N={num_antennas}")


def selection_candidates(num_antennas: int, region: Region) -> Placement:
    """2N half-wavelength candidates whose first N entries are exactly ``fpa_layout``."""
    columns = math.ceil(math.sqrt(num_antennas))
    points = planar_lattice(2 * num_antennas, columns, region.wavelength / 2)
    return _fit(points, region, f"selection candidates for N={num_antennas}")
