"""Deterministic and average-rate upper bounds for MA-enhanced DF and AF relaying.

The deterministic bounds assume each antenna can reach a position where every
path adds coherently, giving the per-antenna gain (Σ|c_ℓ|)². The average bounds
replace (Σ|c_ℓ|)² by a random variable: a scaled sum of L Rayleigh amplitudes
for DF, and its second moment ρ²[1 + (L-1)π/4] for AF.

The sum of L Rayleigh amplitudes is approximated by a chi variable with 2L
degrees of freedom and scale √α, which is exactly the CDF/PDF pair exposed here.
"""
import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import integrate, stats
from scipy.special import gammaln, logsumexp

from src.core.channel import PathSet
from src.core.rate import SystemParams, half_duplex_rate

AlphaConvention = Literal["small_argument", "as_printed"]


class AarParams(BaseModel):
    """Constants of the average bounds: α for DF, second moments V for AF."""

    model_config = ConfigDict(frozen=True)

    alpha1: float = Field(gt=0)
    alpha2: float = Field(gt=0)
    v1: float = Field(gt=0)
    v2: float = Field(gt=0)


def _check_paths(count: int, name: str) -> None:
    if count < 1:
        raise ValueError(f"{name} must be >= 1, got {count}")


def log_double_factorial_odd(num_paths: int) -> float:
    """log((2L-1)!!) = log((2L)!) - L·log 2 - log(L!)."""
    _check_paths(num_paths, "num_paths")
    return float(gammaln(2 * num_paths + 1) - num_paths * math.log(2) - gammaln(num_paths + 1))


def sum_amplitude_moment(num_paths: int, avg_power: float) -> float:
    """E[(Σ|c_ℓ|)²] = ρ²[1 + (L-1)π/4] for i.i.d. CN(0, ρ²/L) coefficients."""
    _check_paths(num_paths, "num_paths")
    return avg_power * (1 + (num_paths - 1) * math.pi / 4)


def rayleigh_sum_alpha(num_paths: int, avg_power: float, power: float, noise: float,
                       convention: AlphaConvention = "small_argument") -> float:
    """Scale parameter α of the chi approximation to √(P/σ²)·Σ|c_ℓ|.

    ``small_argument`` divides by 2L, which matches the density near zero and keeps
    E[X²] = 2Lα close to the true mean. ``as_printed`` divides by 2L².
    """
    _check_paths(num_paths, "num_paths")
    root = math.exp(log_double_factorial_odd(num_paths) / num_paths)
    denominator = {"small_argument": 2 * num_paths, "as_printed": 2 * num_paths**2}[convention]
    return avg_power * power * root / (denominator * noise)


def aar_params(l_r: int, l_t: int, rho1_sq: float, rho2_sq: float, params: SystemParams,
               convention: AlphaConvention = "small_argument") -> AarParams:
    _check_paths(l_r, "l_r")
    _check_paths(l_t, "l_t")
    return AarParams(
        alpha1=rayleigh_sum_alpha(l_r, rho1_sq, params.p_source, params.noise_relay, convention),
        alpha2=rayleigh_sum_alpha(l_t, rho2_sq, params.p_relay, params.noise_dest, convention),
        v1=sum_amplitude_moment(l_r, rho1_sq),
        v2=sum_amplitude_moment(l_t, rho2_sq),
    )


def gain_upper_bound(paths: PathSet, num_antennas: int) -> float:
    """N·(Σ_ℓ|c_ℓ|)², the largest ‖h‖² any placement of N antennas can reach."""
    return num_antennas * paths.l1_norm**2


def rate_df_upper(paths_sr: PathSet, paths_rd: PathSet, params: SystemParams) -> float:
    n = params.num_antennas
    snr_sr, snr_rd = params.stage_snrs(paths_sr.l1_norm**2, paths_rd.l1_norm**2)
    return half_duplex_rate(n * min(snr_sr, snr_rd))


def rate_af_upper(paths_sr: PathSet, paths_rd: PathSet, params: SystemParams) -> float:
    n = params.num_antennas
    return half_duplex_rate(params.af_snr(n * paths_sr.l1_norm**2, n * paths_rd.l1_norm**2))


def _tail_moment(l_survival: int, l_density: int, a_survival: float, a_density: float) -> float:
    """E[Y²; X > Y] in closed form, X ~ (l_survival, a_survival), Y ~ (l_density, a_density)."""
    k = np.arange(l_survival)
    log_terms = (
        math.log(2)
        + (l_density + 1) * math.log(a_survival)
        + (k + 1) * math.log(a_density)
        + gammaln(k + l_density + 1)
        - (k + l_density + 1) * math.log(a_survival + a_density)
        - gammaln(k + 1)
        - gammaln(l_density)
    )
    return float(np.exp(logsumexp(log_terms)))


def aar_df_terms(l_r: int, l_t: int, aar: AarParams) -> tuple[float, float]:
    """(I₁, I₂): E[Ỹ²; X̃ > Ỹ] and E[X̃²; Ỹ > X̃], summing to E[min(X̃², Ỹ²)]."""
    _check_paths(l_r, "l_r")
    _check_paths(l_t, "l_t")
    i1 = _tail_moment(l_r, l_t, aar.alpha1, aar.alpha2)
    i2 = _tail_moment(l_t, l_r, aar.alpha2, aar.alpha1)
    return i1, i2


def aar_df_upper(l_r: int, l_t: int, rho1_sq: float, rho2_sq: float, params: SystemParams,
                 convention: AlphaConvention = "small_argument") -> float:
    i1, i2 = aar_df_terms(l_r, l_t, aar_params(l_r, l_t, rho1_sq, rho2_sq, params, convention))
    return half_duplex_rate(params.num_antennas * (i1 + i2))


def aar_af_upper(l_r: int, l_t: int, rho1_sq: float, rho2_sq: float, params: SystemParams) -> float:
    aar = aar_params(l_r, l_t, rho1_sq, rho2_sq, params)
    n = params.num_antennas
    return half_duplex_rate(params.af_snr(n * aar.v1, n * aar.v2))


def _rayleigh_sum(num_paths: int, alpha: float):
    _check_paths(num_paths, "num_paths")
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    return stats.chi(df=2 * num_paths, scale=math.sqrt(alpha))


def _check_zeta(zeta) -> np.ndarray:
    z = np.asarray(zeta, dtype=float)
    if np.any(z < 0):
        raise ValueError("zeta must be >= 0")
    return z


def rayleigh_sum_cdf(zeta, num_paths: int, alpha: float):
    """1 - exp(-ζ²/2α)·Σ_{k<L} (ζ²/2α)^k / k!."""
    z = _check_zeta(zeta)
    out = _rayleigh_sum(num_paths, alpha).cdf(z)
    return float(out) if out.ndim == 0 else out


def rayleigh_sum_pdf(zeta, num_paths: int, alpha: float):
    """ζ^(2L-1)·exp(-ζ²/2α) / (2^(L-1)·α^L·(L-1)!)."""
    z = _check_zeta(zeta)
    out = _rayleigh_sum(num_paths, alpha).pdf(z)
    return float(out) if out.ndim == 0 else out


def aar_df_terms_quadrature(l_r: int, l_t: int, aar: AarParams) -> tuple[float, float]:
    """(I₁, I₂) by adaptive quadrature of ∫ζ²(1 - F)f dζ; oracle for ``aar_df_terms``."""
    x = _rayleigh_sum(l_r, aar.alpha1)
    y = _rayleigh_sum(l_t, aar.alpha2)
    opts = {"epsabs": 0.0, "epsrel": 1e-11, "limit": 200}
    i1, _ = integrate.quad(lambda z: z * z * x.sf(z) * y.pdf(z), 0, np.inf, **opts)
    i2, _ = integrate.quad(lambda z: z * z * y.sf(z) * x.pdf(z), 0, np.inf, **opts)
    return i1, i2
