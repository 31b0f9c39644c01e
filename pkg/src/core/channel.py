"""Field-response channel model for a relay with movable antennas.

Positions are 2-D coordinates in meters relative to the relay's reference
point o = (0, 0). A propagation side (source→relay or relay→destination) is
described by a PathSet: per-path elevation/azimuth angles and complex
path-response coefficients. The same maths serves both sides; only the
PathSet differs.

Random draws use ``numpy.random.Philox`` (a counter-based generator) seeded
through ``numpy.random.SeedSequence`` so that a seed reproduces the same
realization on every platform. Draw order for one PathSet of L paths:
L elevations, L azimuths, L real parts, L imaginary parts.
"""
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from src.core.errors import DimensionMismatchError, InfeasiblePlacementError

HALF_PI = math.pi / 2
SPACING_TOL = 1e-12

SeedLike = int | np.random.SeedSequence | np.random.Generator


def _frozen_array(value, dtype) -> np.ndarray:
    arr = np.array(value, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


class Region(BaseModel):
    """Square moving area [-A/2, A/2]² with minimum inter-antenna distance D."""

    model_config = ConfigDict(frozen=True)

    side_length: float = Field(gt=0)
    min_spacing: float = Field(gt=0)
    wavelength: float = Field(default=1.0, gt=0)

    @property
    def half_side(self) -> float:
        return self.side_length / 2

    def contains(self, position) -> bool:
        x, y = position
        h = self.half_side
        return -h <= x <= h and -h <= y <= h


class PathSet(BaseModel):
    """Angles and complex path-response coefficients of one propagation side."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    elevations: np.ndarray
    azimuths: np.ndarray
    coefficients: np.ndarray
    avg_power: float = Field(default=1.0, gt=0)

    _direction: np.ndarray = PrivateAttr()

    @field_validator("elevations", "azimuths", mode="before")
    @classmethod
    def _as_angles(cls, v) -> np.ndarray:
        arr = _frozen_array(v, float).reshape(-1)
        if np.any(np.abs(arr) > HALF_PI + 1e-12):
            raise ValueError("path angles must lie in [-pi/2, pi/2]")
        return arr

    @field_validator("coefficients", mode="before")
    @classmethod
    def _as_coefficients(cls, v) -> np.ndarray:
        return _frozen_array(v, complex).reshape(-1)

    @model_validator(mode="after")
    def _check_lengths(self) -> "PathSet":
        n = len(self.coefficients)
        if n == 0:
            raise ValueError("a PathSet needs at least one path")
        if len(self.elevations) != n or len(self.azimuths) != n:
            raise ValueError(
                f"elevations ({len(self.elevations)}), azimuths ({len(self.azimuths)}) and "
                f"coefficients ({n}) must have equal length"
            )
        return self

    def model_post_init(self, __context) -> None:
        x_cos = np.sin(self.elevations) * np.cos(self.azimuths)
        y_cos = np.cos(self.elevations)
        self._direction = _frozen_array(np.stack([x_cos, y_cos]), float)

    @property
    def num_paths(self) -> int:
        return len(self.coefficients)

    @property
    def direction(self) -> np.ndarray:
        """2×L matrix whose columns are (sinθ·cosφ, cosθ) per path."""
        return self._direction

    @property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.coefficients)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PathSet):
            return NotImplemented
        return (
            self.avg_power == other.avg_power
            and np.array_equal(self.elevations, other.elevations)
            and np.array_equal(self.azimuths, other.azimuths)
            and np.array_equal(self.coefficients, other.coefficients)
        )

    __hash__ = None


class Placement(BaseModel):
    """Ordered positions of N antennas, an N×2 array in meters."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    positions: np.ndarray

    @field_validator("positions", mode="before")
    @classmethod
    def _as_positions(cls, v) -> np.ndarray:
        arr = _frozen_array(v, float)
        if arr.ndim == 1 and arr.size == 2:
            arr = _frozen_array(arr.reshape(1, 2), float)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
            raise ValueError(f"positions must have shape (N, 2) with N >= 1, got {arr.shape}")
        return arr

    @property
    def num_antennas(self) -> int:
        return self.positions.shape[0]

    def with_position(self, index: int, position) -> "Placement":
        updated = np.array(self.positions)
        updated[index] = position
        return Placement(positions=updated)

    def violations(self, region: Region) -> list[str]:
        problems = []
        for n, p in enumerate(self.positions):
            if not region.contains(p):
                problems.append(f"antenna {n} at ({p[0]:.6g}, {p[1]:.6g}) lies outside the region")
        limit = region.min_spacing - SPACING_TOL * region.wavelength
        for m in range(self.num_antennas):
            for n in range(m + 1, self.num_antennas):
                d = float(np.hypot(*(self.positions[m] - self.positions[n])))
                if d < limit:
                    problems.append(f"antennas {m} and {n} are {d:.6g} apart (< {region.min_spacing:.6g})")
        return problems

    def is_feasible(self, region: Region) -> bool:
        return not self.violations(region)

    def check_feasible(self, region: Region) -> None:
        problems = self.violations(region)
        if problems:
            raise InfeasiblePlacementError("; ".join(problems))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Placement):
            return NotImplemented
        return np.array_equal(self.positions, other.positions)

    __hash__ = None


def spacing_ok(positions: np.ndarray, index: int, candidate: np.ndarray, region: Region) -> bool:
    """True if ``candidate`` keeps distance >= D from every antenna other than ``index``."""
    if positions.shape[0] == 1:
        return True
    others = np.delete(positions, index, axis=0)
    dist = np.hypot(others[:, 0] - candidate[0], others[:, 1] - candidate[1])
    return bool(np.all(dist >= region.min_spacing - SPACING_TOL * region.wavelength))


def receive_frv(position, paths: PathSet, wavelength: float = 1.0) -> np.ndarray:
    """Receive field-response vector: exp(j·2π/λ·(x·sinθ·cosφ + y·cosθ)) per path."""
    x, y = position
    omega = x * paths.direction[0] + y * paths.direction[1]
    return np.exp(1j * (2 * math.pi / wavelength) * omega)


def transmit_frv(position, paths: PathSet, wavelength: float = 1.0) -> np.ndarray:
    """Transmit field-response vector; identical maths with the transmit-side angles."""
    return receive_frv(position, paths, wavelength)


def _channel(placement: Placement, paths: PathSet, wavelength: float) -> np.ndarray:
    phases = (2 * math.pi / wavelength) * (placement.positions @ paths.direction)
    # row n is f(p_n)^T, so h = conj(F) @ g
    return np.exp(-1j * phases) @ paths.coefficients


def channel_sr(placement: Placement, paths: PathSet, wavelength: float = 1.0) -> np.ndarray:
    """Source→relay channel h₁, entry n = f₁(r_n)ᴴ g₁."""
    return _channel(placement, paths, wavelength)


def channel_rd(placement: Placement, paths: PathSet, wavelength: float = 1.0) -> np.ndarray:
    """Relay→destination channel h₂, entry n = g₂(t_n)ᴴ f₂."""
    return _channel(placement, paths, wavelength)


def antenna_gain(position, paths: PathSet, wavelength: float = 1.0) -> float:
    """|f(p)ᴴ g|², the channel power gain of a single antenna at ``position``."""
    h = np.vdot(receive_frv(position, paths, wavelength), paths.coefficients)
    return float(h.real * h.real + h.imag * h.imag)


def channel_gain(placement: Placement, paths: PathSet, wavelength: float = 1.0) -> float:
    """‖h‖² over all antennas of ``placement``."""
    h = _channel(placement, paths, wavelength)
    return float(np.vdot(h, h).real)


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Philox generator for ``seed``; a Generator is passed through untouched."""
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def draw_coefficients(
    rng: np.random.Generator, num_paths: int, avg_power: float, size: int | None = None
) -> np.ndarray:
    """i.i.d. CN(0, ρ²/L) coefficients; shape (L,) or (size, L)."""
    shape = (num_paths,) if size is None else (size, num_paths)
    scale = math.sqrt(avg_power / num_paths / 2)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_paths(num_paths: int, avg_power: float = 1.0, seed: SeedLike = 0) -> PathSet:
    """Random PathSet: angles uniform on [-π/2, π/2], coefficients CN(0, ρ²/L)."""
    if num_paths < 1:
        raise ValueError(f"num_paths must be >= 1, got {num_paths}")
    if avg_power <= 0:
        raise ValueError(f"avg_power must be > 0, got {avg_power}")
    rng = make_rng(seed)
    elevations = rng.uniform(-HALF_PI, HALF_PI, num_paths)
    azimuths = rng.uniform(-HALF_PI, HALF_PI, num_paths)
    coefficients = draw_coefficients(rng, num_paths, avg_power)
    return PathSet(elevations=elevations, azimuths=azimuths, coefficients=coefficients, avg_power=avg_power)


class ChannelRealization(BaseModel):
    """Both propagation sides of one Monte Carlo trial, derived from a single seed."""

    model_config = ConfigDict(frozen=True)

    seed: int
    paths_sr: PathSet
    paths_rd: PathSet

    @classmethod
    def from_seed(cls, seed: int, paths_sr: int, paths_rd: int, rho1_sq: float = 1.0, rho2_sq: float = 1.0):
        rng = make_rng(seed)
        return cls(
            seed=seed,
            paths_sr=sample_paths(paths_sr, rho1_sq, rng),
            paths_rd=sample_paths(paths_rd, rho2_sq, rng),
        )


def require_same_length(*vectors: np.ndarray) -> int:
    lengths = {len(v) for v in vectors}
    if len(lengths) != 1:
        raise DimensionMismatchError(f"vector lengths differ: {sorted(lengths)}")
    return lengths.pop()
