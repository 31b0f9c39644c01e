"""Projected gradient ascent over antenna positions and the two-stage AO drivers.

``ascend_antenna`` moves one antenna with backtracking line search: each
iteration starts from ``eta_init`` and shrinks the step by ``shrink`` until the
projected candidate keeps the objective non-decreasing and respects the minimum
spacing to every other antenna. Once the step falls to ``eta_min`` the antenna
is declared converged and the last accepted position is kept. The ascent is then
repeated from the best peaks of a coarse lattice scan (``restarts`` of them,
``scan_step`` apart) and the highest end point wins.

``alternate`` sweeps the antennas in ascending index order (each sees the
others' current positions) until a full round improves the objective by less
than ``ao_tol``.
"""
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.ndimage import maximum_filter

from src.core.channel import Placement, Region, SeedLike, channel_gain, channel_rd, channel_sr, make_rng, spacing_ok
from src.core.errors import InfeasiblePlacementError, InvariantViolation
from src.core.rate import SystemParams, af_beamformer, rate_af, rate_df
from src.core.results import OptimizeResult
from src.services.baselines.grid import grid_size
from src.services.baselines.layouts import planar_lattice
from src.services.optimizer.base import PlacementObjective
from src.services.optimizer.gain import GainObjective

logger = logging.getLogger("ma_relay.optimizer")

TRACE_RTOL = 1e-9
RANDOM_INIT_ATTEMPTS = 10_000


class PgaSchedule(BaseModel):
    """Step-size and iteration controls, lengths in wavelengths."""

    model_config = ConfigDict(frozen=True)

    eta_init: float = Field(default=10.0, gt=0)
    eta_min: float = Field(default=1e-4, gt=0)
    shrink: float = Field(default=0.5, gt=0, lt=1)
    max_iters: int = Field(default=300, gt=0)
    ao_tol: float = Field(default=1e-3, gt=0)
    max_ao_rounds: int = Field(default=100, gt=0)
    restarts: int = Field(default=4, ge=0)  # 0 keeps the single ascent from the current position
    scan_step: float = Field(default=1 / 16, gt=0)

    @model_validator(mode="after")
    def _check_steps(self) -> "PgaSchedule":
        if self.eta_min >= self.eta_init:
            raise ValueError(f"eta_min ({self.eta_min}) must be smaller than eta_init ({self.eta_init})")
        return self

    @property
    def max_shrinks(self) -> int:
        """Backtracking steps before η reaches η_min."""
        return math.ceil(math.log(self.eta_min / self.eta_init) / math.log(self.shrink))


def project(position, region: Region) -> np.ndarray:
    """Clamp each coordinate to [-A/2, A/2]."""
    h = region.half_side
    return np.clip(np.asarray(position, dtype=float), -h, h)


def _ascend_from(
    index: int,
    start: np.ndarray,
    positions: np.ndarray,
    objective: PlacementObjective,
    region: Region,
    schedule: PgaSchedule,
) -> tuple[np.ndarray, list[float]]:
    lam = region.wavelength
    eta_init = schedule.eta_init * lam
    eta_min = schedule.eta_min * lam
    position = np.array(start, dtype=float)
    value = objective.antenna_value(index, position, positions)
    trace = [value]

    for _ in range(schedule.max_iters):
        grad = objective.antenna_gradient(index, position, positions)
        if not np.any(grad):
            break
        eta = eta_init
        accepted = None
        while eta > eta_min:
            candidate = project(position + eta * grad, region)
            if np.array_equal(candidate, position):
                break
            candidate_value = objective.antenna_value(index, candidate, positions)
            if candidate_value >= value and spacing_ok(positions, index, candidate, region):
                accepted = candidate, candidate_value
                break
            eta *= schedule.shrink
        if accepted is None:
            break
        position, value = accepted
        trace.append(value)

    return position, trace


def restart_points(
    index: int,
    positions: np.ndarray,
    objective: PlacementObjective,
    region: Region,
    schedule: PgaSchedule,
) -> list[np.ndarray]:
    """Up to ``restarts`` local maxima of the objective on a coarse lattice of cell centers.

    Only points keeping the minimum spacing to the other antennas qualify; the
    best-valued come first, ties in row-major order.
    """
    step = schedule.scan_step * region.wavelength
    size = grid_size(region.side_length, step)
    centers = -region.half_side + step / 2 + step * np.arange(size)
    xx, yy = np.meshgrid(centers, centers)
    candidates = np.column_stack([xx.ravel(), yy.ravel()])
    values = objective.antenna_values(index, candidates, positions).reshape(size, size)
    peaks = values >= maximum_filter(values, size=3, mode="nearest")

    flat = values.ravel()
    starts: list[np.ndarray] = []
    for i in np.flatnonzero(peaks.ravel())[np.argsort(-flat[peaks.ravel()], kind="stable")]:
        if spacing_ok(positions, index, candidates[i], region):
            starts.append(candidates[i])
            if len(starts) == schedule.restarts:
                break
    return starts


def ascend_antenna(
    index: int,
    positions: np.ndarray,
    objective: PlacementObjective,
    region: Region,
    schedule: PgaSchedule,
) -> tuple[np.ndarray, list[float]]:
    """Run PGA on antenna ``index``; returns its final position and the accepted objective values.

    The ascent starts from the antenna's current position. With ``restarts`` > 0
    it is repeated from the best coarse-lattice peaks, and a restart replaces the
    result only when it ends higher by more than rounding, so the trace stays non-decreasing.
    """
    position, trace = _ascend_from(index, positions[index], positions, objective, region, schedule)
    if schedule.restarts == 0:
        return position, trace

    best, best_value = position, trace[-1]
    for start in restart_points(index, positions, objective, region, schedule):
        candidate, candidate_trace = _ascend_from(index, start, positions, objective, region, schedule)
        # rounding-level gains do not count: a flat landscape must leave the antenna in place
        if candidate_trace[-1] > best_value + TRACE_RTOL * max(1.0, abs(best_value)):
            best, best_value = candidate, candidate_trace[-1]
    if best is not position:
        logger.debug("antenna %d: restart raised the objective from %.6g to %.6g", index, trace[-1], best_value)
        trace.append(best_value)
    return best, trace


def pga_single(index: int, placement: Placement, paths, region: Region, schedule: PgaSchedule) -> np.ndarray:
    """Maximize |h_n|² over antenna ``index`` with the other antennas fixed."""
    placement.check_feasible(region)
    if not 0 <= index < placement.num_antennas:
        raise IndexError(f"antenna index {index} out of range for {placement.num_antennas} antennas")
    objective = GainObjective(paths, region.wavelength)
    position, _ = ascend_antenna(index, placement.positions, objective, region, schedule)
    return position


def _check_trace(trace: list[float], label: str) -> None:
    for before, after in zip(trace, trace[1:]):
        if after < before - TRACE_RTOL * max(1.0, abs(before)):
            raise InvariantViolation(f"{label} objective decreased from {before!r} to {after!r}")


def alternate(
    objective: PlacementObjective,
    init: Placement,
    region: Region,
    schedule: PgaSchedule,
    verify: bool = False,
) -> tuple[Placement, list[float]]:
    """Gauss-Seidel AO over antennas; returns the placement and the objective after each round."""
    init.check_feasible(region)
    positions = np.array(init.positions)
    value = objective.total(positions)
    trace = [value]

    for round_index in range(schedule.max_ao_rounds):
        for n in range(len(positions)):
            positions[n], inner = ascend_antenna(n, positions, objective, region, schedule)
            if verify:
                _check_trace(inner, f"{objective.name} antenna {n}")
                Placement(positions=positions).check_feasible(region)
        new_value = objective.total(positions)
        trace.append(new_value)
        if new_value - value < schedule.ao_tol:
            break
        value = new_value
    else:
        logger.debug("%s AO hit max_ao_rounds=%d", objective.name, schedule.max_ao_rounds)

    if verify:
        _check_trace(trace, objective.name)
    logger.debug("%s AO finished after %d rounds: %.6g -> %.6g", objective.name, round_index + 1, trace[0], trace[-1])
    return Placement(positions=positions), trace


def optimize_stage(paths, region: Region, schedule: PgaSchedule, init: Placement,
                   verify: bool = False) -> tuple[Placement, list[float]]:
    """Maximize ‖h(placement)‖² for one propagation side."""
    return alternate(GainObjective(paths, region.wavelength), init, region, schedule, verify)


def _optimize_positions(paths_sr, paths_rd, region, params, schedule, init_rx, init_tx, verify):
    for init in (init_rx, init_tx):
        if init.num_antennas != params.num_antennas:
            raise InfeasiblePlacementError(
                f"initial placement has {init.num_antennas} antennas, expected {params.num_antennas}"
            )
    # The stages share no variables.
    placement_rx, trace_rx = optimize_stage(paths_sr, region, schedule, init_rx, verify)
    placement_tx, trace_tx = optimize_stage(paths_rd, region, schedule, init_tx, verify)
    h1 = channel_sr(placement_rx, paths_sr, region.wavelength)
    h2 = channel_rd(placement_tx, paths_rd, region.wavelength)
    return placement_rx, placement_tx, trace_rx, trace_tx, h1, h2


def optimize_df(paths_sr, paths_rd, region: Region, params: SystemParams, schedule: PgaSchedule,
                init_rx: Placement, init_tx: Placement, verify: bool = False) -> OptimizeResult:
    placement_rx, placement_tx, trace_rx, trace_tx, h1, h2 = _optimize_positions(
        paths_sr, paths_rd, region, params, schedule, init_rx, init_tx, verify
    )
    return OptimizeResult(
        placement_rx=placement_rx,
        placement_tx=placement_tx,
        gain_rx=channel_gain(placement_rx, paths_sr, region.wavelength),
        gain_tx=channel_gain(placement_tx, paths_rd, region.wavelength),
        rate=rate_df(h1, h2, params),
        trace_rx=trace_rx,
        trace_tx=trace_tx,
    )


def optimize_af(paths_sr, paths_rd, region: Region, params: SystemParams, schedule: PgaSchedule,
                init_rx: Placement, init_tx: Placement, verify: bool = False) -> OptimizeResult:
    """Same positions as the DF optimization, followed by the rank-one beamformer."""
    placement_rx, placement_tx, trace_rx, trace_tx, h1, h2 = _optimize_positions(
        paths_sr, paths_rd, region, params, schedule, init_rx, init_tx, verify
    )
    beamformer = af_beamformer(h1, h2, params)
    return OptimizeResult(
        placement_rx=placement_rx,
        placement_tx=placement_tx,
        gain_rx=channel_gain(placement_rx, paths_sr, region.wavelength),
        gain_tx=channel_gain(placement_tx, paths_rd, region.wavelength),
        rate=rate_af(h1, h2, beamformer.matrix, params),
        trace_rx=trace_rx,
        trace_tx=trace_tx,
        beamformer=beamformer,
    )


def feasible_init(num_antennas: int, region: Region, mode: str = "uniform_grid", seed: SeedLike = 0) -> Placement:
    """A placement satisfying the region and spacing constraints.

    ``uniform_grid`` lays the antennas on a ⌈√N⌉-column lattice centered at the
    origin with pitch max(λ/2, D). ``random`` draws positions uniformly, rejecting
    those too close to earlier antennas.
    """
    if num_antennas < 1:
        raise ValueError(f"num_antennas must be >= 1, got {num_antennas}")
    if mode == "uniform_grid":
        pitch = max(region.wavelength / 2, region.min_spacing)
        placement = Placement(positions=planar_lattice(num_antennas, math.ceil(math.sqrt(num_antennas)), pitch))
        if not placement.is_feasible(region):
            raise InfeasiblePlacementError(
                f"{num_antennas} antennas at pitch {pitch:.6g} do not fit in a region of side {region.side_length:.6g}"
            )
        return placement
    if mode == "random":
        return _random_init(num_antennas, region, make_rng(seed))
    raise ValueError(f"Unknown init mode: {mode}")


def _random_init(num_antennas: int, region: Region, rng: np.random.Generator) -> Placement:
    h = region.half_side
    limit = region.min_spacing
    placed: list[np.ndarray] = []
    for _ in range(RANDOM_INIT_ATTEMPTS):
        candidate = rng.uniform(-h, h, 2)
        if all(np.hypot(*(candidate - p)) >= limit for p in placed):
            placed.append(candidate)
            if len(placed) == num_antennas:
                return Placement(positions=np.array(placed))
    raise InfeasiblePlacementError(
        f"could not place {num_antennas} antennas with spacing {limit:.6g} after {RANDOM_INIT_ATTEMPTS} attempts"
    )
