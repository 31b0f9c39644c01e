"""Exhaustive single-antenna search over a uniform grid of cell centers."""
import math

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.core.channel import PathSet, Region
from src.core.results import GainGrid

DEFAULT_STEP = 0.01  # wavelengths
TIE_RTOL = 1e-12


class GridSearchResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    best_position: np.ndarray
    best_gain: float
    grid: GainGrid


def grid_size(side_length: float, step: float) -> int:
    # absorbs division noise such as 2.0 / 0.01 = 200.00000000000003
    return math.ceil(side_length / step - 1e-9)


def gain_grid(paths: PathSet, region: Region, step: float | None = None) -> GainGrid:
    """|f(p)ᴴg|² at every cell center, origin cell at (-A/2 + step/2, -A/2 + step/2).

    The phase is separable in x and y, so the whole grid is one (M×L)·(L×M) product.
    """
    step = DEFAULT_STEP * region.wavelength if step is None else step
    if step <= 0:
        raise ValueError(f"grid step must be > 0, got {step}")
    size = grid_size(region.side_length, step)
    centers = -region.half_side + step / 2 + step * np.arange(size)
    k = 2 * math.pi / region.wavelength
    a, b = paths.direction
    ex = np.exp(-1j * k * np.outer(centers, a))
    ey = np.exp(-1j * k * np.outer(centers, b))
    h = (ey * paths.coefficients) @ ex.T
    values = h.real * h.real + h.imag * h.imag
    return GainGrid(step=step, origin=(float(centers[0]), float(centers[0])), values=values)


def grid_exhaustive(paths: PathSet, region: Region, step: float | None = None) -> GridSearchResult:
    """Best single-antenna position on the grid; near-ties resolve to the lowest row-major index."""
    grid = gain_grid(paths, region, step)
    flat = grid.values.ravel()
    best = float(flat.max())
    index = int(np.argmax(flat >= best * (1 - TIE_RTOL)))
    row, col = divmod(index, grid.shape[1])
    return GridSearchResult(best_position=grid.cell_center(row, col), best_gain=float(flat[index]), grid=grid)
