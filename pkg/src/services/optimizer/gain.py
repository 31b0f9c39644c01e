"""Per-antenna channel power gain and its closed-form gradient."""
import math

import numpy as np

from src.core.channel import PathSet
from src.services.optimizer.base import PlacementObjective


def antenna_gains(positions: np.ndarray, paths: PathSet, wavelength: float = 1.0) -> np.ndarray:
    """|f(p_n)ᴴ g|² for every row p_n of ``positions``.

    Evaluated elementwise so that a row gives bit-identical results whether it is
    computed alone or inside a larger array.
    """
    positions = np.atleast_2d(positions)
    a, b = paths.direction
    omega = positions[:, 0:1] * a + positions[:, 1:2] * b
    terms = np.exp(-1j * (2 * math.pi / wavelength) * omega) * paths.coefficients
    # accumulate path by path: np.sum may associate differently for one row than for many
    h = terms[:, 0].copy()
    for column in terms[:, 1:].T:
        h += column
    return h.real * h.real + h.imag * h.imag


def gain_gradient(position, paths: PathSet, wavelength: float = 1.0) -> np.ndarray:
    """∇|h(p)|² as the double sum over path pairs.

    With G = g·gᴴ and ϑ = k(ω_ℓ₁ - ω_ℓ₂) - arg G_ℓ₁ℓ₂, each coordinate is
    -k·Σ |G_ℓ₁ℓ₂|·sin ϑ·(d_ℓ₁ - d_ℓ₂) where d is that coordinate's direction cosine.
    """
    k = 2 * math.pi / wavelength
    a, b = paths.direction
    x, y = position
    omega = x * a + y * b
    g = paths.coefficients
    pair = np.outer(g, g.conj())
    weighted_sin = np.abs(pair) * np.sin(k * (omega[:, None] - omega[None, :]) - np.angle(pair))
    dx = -k * np.sum(weighted_sin * (a[:, None] - a[None, :]))
    dy = -k * np.sum(weighted_sin * (b[:, None] - b[None, :]))
    return np.array([dx, dy])


class GainObjective(PlacementObjective):
    """‖h(placement)‖², the sum of single-antenna gains for one propagation side."""

    name = "channel_gain"

    def __init__(self, paths: PathSet, wavelength: float = 1.0):
        self.paths = paths
        self.wavelength = wavelength

    def gains(self, positions: np.ndarray) -> np.ndarray:
        return antenna_gains(positions, self.paths, self.wavelength)

    def gains_with(self, index: int, position: np.ndarray, positions: np.ndarray) -> np.ndarray:
        gains = self.gains(positions)
        gains[index] = self.gains(position)[0]
        return gains

    def total(self, positions: np.ndarray) -> float:
        return float(np.sum(self.gains(positions)))

    def antenna_value(self, index: int, position: np.ndarray, positions: np.ndarray) -> float:
        return float(np.sum(self.gains_with(index, position, positions)))

    def antenna_gradient(self, index: int, position: np.ndarray, positions: np.ndarray) -> np.ndarray:
        return gain_gradient(position, self.paths, self.wavelength)

    def antenna_values(self, index: int, candidates: np.ndarray, positions: np.ndarray) -> np.ndarray:
        gains = self.gains(positions)
        return (np.sum(gains) - gains[index]) + self.gains(candidates)
