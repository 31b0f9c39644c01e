"""Antenna selection: the best N of 2N fixed half-wavelength antennas."""
import itertools
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.core.channel import Placement, PathSet, channel_rd, channel_sr
from src.core.rate import SystemParams, af_beamformer, rate_af, rate_df

MAX_SELECTION_ANTENNAS = 12
TIE_RTOL = 1e-12
_BATCH = 100_000

Relaying = Literal["df", "af"]


class Selection(BaseModel):
    model_config = ConfigDict(frozen=True)

    subset_rx: tuple[int, ...]
    subset_tx: tuple[int, ...]
    rate: float


def _top_subset(gains: np.ndarray, size: int) -> tuple[int, ...]:
    """Indices of the ``size`` largest gains; near-equal gains prefer smaller indices."""
    scale = float(np.max(gains))
    keys = np.round(gains / scale, 12) if scale > 0 else np.zeros_like(gains)
    order = np.argsort(-keys, kind="stable")
    return tuple(sorted(int(i) for i in order[:size]))


def _subset_rate(candidates, subset_rx, subset_tx, paths_sr, paths_rd, params, relaying, wavelength) -> float:
    h1 = channel_sr(Placement(positions=candidates.positions[list(subset_rx)]), paths_sr, wavelength)
    h2 = channel_rd(Placement(positions=candidates.positions[list(subset_tx)]), paths_rd, wavelength)
    if relaying == "df":
        return rate_df(h1, h2, params)
    return rate_af(h1, h2, af_beamformer(h1, h2, params).matrix, params)


def _stage_gains(h: np.ndarray) -> np.ndarray:
    return h.real * h.real + h.imag * h.imag


def _shared_subset(g1: np.ndarray, g2: np.ndarray, size: int, params: SystemParams, relaying: Relaying):
    """Enumerate every size-N subset in lexicographic order against the end-to-end SNR."""
    combos = itertools.combinations(range(len(g1)), size)
    best_snr, best = -np.inf, None
    while batch := list(itertools.islice(combos, _BATCH)):
        idx = np.array(batch)
        sum1, sum2 = g1[idx].sum(axis=1), g2[idx].sum(axis=1)
        snr = np.minimum(*params.stage_snrs(sum1, sum2)) if relaying == "df" else params.af_snr(sum1, sum2)
        peak = float(np.max(snr))
        if peak > best_snr * (1 + TIE_RTOL):
            threshold = peak * (1 - TIE_RTOL)
            best_snr, best = peak, batch[int(np.argmax(snr >= threshold))]
    return tuple(best)


def antenna_selection(
    candidates: Placement,
    paths_sr: PathSet,
    paths_rd: PathSet,
    params: SystemParams,
    relaying: Relaying = "df",
    shared: bool = False,
    wavelength: float = 1.0,
) -> Selection:
    """Select N of the 2N candidates for each stage.

    ‖h_S‖² = Σ_{n∈S}|h_n|², and both DF and AF rates grow with each stage's gain,
    so per-stage selection keeps the N strongest candidates of each stage. With
    ``shared`` one subset must serve both stages and all C(2N, N) subsets are scored.
    """
    n = params.num_antennas
    if n > MAX_SELECTION_ANTENNAS:
        raise ValueError(f"antenna selection enumerates C(2N, N) subsets; N={n} exceeds {MAX_SELECTION_ANTENNAS}")
    if candidates.num_antennas != 2 * n:
        raise ValueError(f"antenna selection needs {2 * n} candidates, got {candidates.num_antennas}")

    g1 = _stage_gains(channel_sr(candidates, paths_sr, wavelength))
    g2 = _stage_gains(channel_rd(candidates, paths_rd, wavelength))
    if shared:
        subset_rx = subset_tx = _shared_subset(g1, g2, n, params, relaying)
    else:
        subset_rx, subset_tx = _top_subset(g1, n), _top_subset(g2, n)
    rate = _subset_rate(candidates, subset_rx, subset_tx, paths_sr, paths_rd, params, relaying, wavelength)
    return Selection(subset_rx=subset_rx, subset_tx=subset_tx, rate=rate)
