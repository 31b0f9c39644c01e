"""End-to-end DF/AF achievable rates and the optimal AF beamforming matrix."""
import math

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.core.channel import require_same_length
from src.core.errors import DegenerateChannelError, DimensionMismatchError, IllConditionedError

ORACLE_MAX_CONDITION = 1e12


class SystemParams(BaseModel):
    """Powers and noise variances, all on a linear scale."""

    model_config = ConfigDict(frozen=True)

    num_antennas: int = Field(gt=0)
    p_source: float = Field(gt=0)
    p_relay: float = Field(gt=0)
    noise_relay: float = Field(default=1.0, gt=0)
    noise_dest: float = Field(default=1.0, gt=0)

    @classmethod
    def from_snr_db(cls, num_antennas: int, snr_db: float, noise: float = 1.0) -> "SystemParams":
        """P_s = P_r = σ²·10^(SNR/10) with σ_r² = σ_d² = σ²."""
        power = noise * 10 ** (snr_db / 10)
        return cls(num_antennas=num_antennas, p_source=power, p_relay=power, noise_relay=noise, noise_dest=noise)

    def stage_snrs(self, gain_sr: float, gain_rd: float) -> tuple[float, float]:
        """(P_s‖h₁‖²/σ_r², P_r‖h₂‖²/σ_d²)."""
        return self.p_source * gain_sr / self.noise_relay, self.p_relay * gain_rd / self.noise_dest

    def af_snr(self, gain_sr: float, gain_rd: float) -> float:
        """End-to-end SNR of the optimally beamformed AF relay as a function of both gains."""
        num = self.p_source * self.p_relay * gain_sr * gain_rd
        den = (
            self.noise_relay * self.p_relay * gain_rd
            + self.noise_dest * self.p_source * gain_sr
            + self.noise_relay * self.noise_dest
        )
        return num / den

    def af_snr_partials(self, gain_sr: float, gain_rd: float) -> tuple[float, float]:
        """(∂S/∂G₁, ∂S/∂G₂) of ``af_snr``."""
        ps, pr, nr, nd = self.p_source, self.p_relay, self.noise_relay, self.noise_dest
        den = nr * pr * gain_rd + nd * ps * gain_sr + nr * nd
        d_sr = ps * pr * gain_rd * (nr * pr * gain_rd + nr * nd) / den**2
        d_rd = ps * pr * gain_sr * (nd * ps * gain_sr + nr * nd) / den**2
        return d_sr, d_rd


class AfBeamformer(BaseModel):
    """W = β·h₂·h₁ᴴ."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    scale: float = Field(ge=0)

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_matrix(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=complex, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"beamforming matrix must be square, got shape {arr.shape}")
        arr.setflags(write=False)
        return arr


def half_duplex_rate(snr: float) -> float:
    return 0.5 * math.log2(1 + snr)


def _norm_sq(v: np.ndarray) -> float:
    return float(np.vdot(v, v).real)


def rate_df(h1: np.ndarray, h2: np.ndarray, params: SystemParams) -> float:
    """½·log₂(1 + min{P_s‖h₁‖²/σ_r², P_r‖h₂‖²/σ_d²})."""
    require_same_length(h1, h2)
    return half_duplex_rate(min(params.stage_snrs(_norm_sq(h1), _norm_sq(h2))))


def relay_power(h1: np.ndarray, w: np.ndarray, params: SystemParams) -> float:
    """P_s‖W h₁‖² + σ_r²‖W‖_F², the relay transmit power."""
    return _norm_sq(w @ h1) * params.p_source + params.noise_relay * float(np.sum(np.abs(w) ** 2))


def rate_af(h1: np.ndarray, h2: np.ndarray, w: np.ndarray, params: SystemParams) -> float:
    """½·log₂(1 + P_s|h₂ᴴWh₁|² / (σ_r²‖h₂ᴴW‖² + σ_d²))."""
    n = require_same_length(h1, h2)
    w = np.asarray(w)
    if w.shape != (n, n):
        raise DimensionMismatchError(f"beamformer shape {w.shape} does not match channels of length {n}")
    row = h2.conj() @ w
    signal = params.p_source * abs(row @ h1) ** 2
    noise = params.noise_relay * _norm_sq(row) + params.noise_dest
    return half_duplex_rate(signal / noise)


def _require_links(h1: np.ndarray, h2: np.ndarray) -> None:
    require_same_length(h1, h2)
    if not np.any(h1):
        raise DegenerateChannelError("source-relay channel is identically zero")
    if not np.any(h2):
        raise DegenerateChannelError("relay-destination channel is identically zero")


def af_beamformer(h1: np.ndarray, h2: np.ndarray, params: SystemParams) -> AfBeamformer:
    """Rank-one optimum W = β·h₂h₁ᴴ with the relay power constraint active."""
    _require_links(h1, h2)
    g1, g2 = _norm_sq(h1), _norm_sq(h2)
    beta = 1 / math.sqrt(g1 * g2 * (params.p_source * g1 + params.noise_relay) / params.p_relay)
    return AfBeamformer(matrix=beta * np.outer(h2, h1.conj()), scale=beta)


class OracleSolution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    w: np.ndarray
    matrix: np.ndarray
    rate: float


def af_beamformer_oracle(h1: np.ndarray, h2: np.ndarray, params: SystemParams) -> OracleSolution:
    """Solve the vectorized AF problem as a generalized Rayleigh quotient.

    With w = vec(W), h = h₁*⊗h₂, A = I⊗h₂ and B = h₁*⊗I the rate is maximized by
    w = ξ·X₃⁻¹h where X₂ = P_s·BBᴴ + σ_r²I, X₃ = σ_r²·AAᴴ + σ_d²/P_r·X₂ and ξ
    scales w onto the power constraint wᴴX₂w = P_r. Dense solve of an N²×N² system.
    """
    _require_links(h1, h2)
    n = len(h1)
    eye = np.eye(n)
    h = np.kron(h1.conj(), h2)
    a = np.kron(eye, h2.reshape(n, 1))
    b = np.kron(h1.conj().reshape(n, 1), eye)
    x2 = params.p_source * (b @ b.conj().T) + params.noise_relay * np.eye(n * n)
    x3 = params.noise_relay * (a @ a.conj().T) + (params.noise_dest / params.p_relay) * x2

    condition = np.linalg.cond(x3)
    if not np.isfinite(condition) or condition > ORACLE_MAX_CONDITION:
        raise IllConditionedError(f"X3 condition number {condition:.3g} exceeds {ORACLE_MAX_CONDITION:.0e}")

    v = scipy.linalg.solve(x3, h, assume_a="her")
    xi = math.sqrt(params.p_relay) / math.sqrt(float(np.vdot(v, x2 @ v).real))
    w = xi * v
    # vec() stacks columns
    matrix = w.reshape(n, n, order="F")
    return OracleSolution(w=w, matrix=matrix, rate=rate_af(h1, h2, matrix, params))
