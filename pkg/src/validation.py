"""Built-in invariant suite behind ``ma-relay validate``.

Each check draws its own seeded instances and reports pass/fail with a short
detail line; ``fast`` shrinks instance counts so the suite finishes in seconds.
"""
import logging
import math
from collections.abc import Callable

import numpy as np
from pydantic import BaseModel

from src.campaign import run_campaign
from src.config import CampaignConfig, SweepConfig, SystemConfig
from src.core.bounds import (
    aar_af_upper,
    aar_df_terms,
    aar_df_terms_quadrature,
    aar_df_upper,
    aar_params,
    rate_af_upper,
    rate_df_upper,
    sum_amplitude_moment,
)
from src.core.channel import Placement, channel_rd, channel_sr, draw_coefficients, make_rng, sample_paths
from src.core.errors import MaRelayError
from src.core.rate import SystemParams, af_beamformer, af_beamformer_oracle, rate_af, rate_df, relay_power
from src.services.optimizer.gain import antenna_gains, gain_gradient

logger = logging.getLogger("ma_relay.validation")

SEED = 20240917


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str


def _complex_normal(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)


def check_gradient(fast: bool) -> CheckResult:
    """Closed-form gain gradient against central finite differences (step 1e-6λ)."""
    rng = make_rng(SEED)
    step = 1e-6
    worst = 0.0
    for _ in range(50 if fast else 1000):
        paths = sample_paths(int(rng.integers(2, 9)), 1.0, rng)
        p = rng.uniform(-5, 5, 2)
        grad = gain_gradient(p, paths)
        shifts = np.array([[step, 0.0], [-step, 0.0], [0.0, step], [0.0, -step]])
        g = antenna_gains(p + shifts, paths)
        fd = np.array([g[0] - g[1], g[2] - g[3]]) / (2 * step)
        scale = max(float(np.linalg.norm(grad)), 1e-3 * 2 * math.pi * paths.l1_norm**2)
        worst = max(worst, float(np.linalg.norm(fd - grad)) / scale)
    return CheckResult(name="gradient", passed=worst < 1e-5, detail=f"max relative error {worst:.3g}")


def check_af_oracle(fast: bool) -> CheckResult:
    """Rank-one beamformer against the vectorized generalized-Rayleigh-quotient solution."""
    rng = make_rng(SEED + 1)
    worst_rank = worst_slack = worst_rate = 0.0
    for n in (1, 2, 4, 8):
        params = SystemParams(num_antennas=n, p_source=10.0, p_relay=10.0)
        for _ in range(5 if fast else 250):
            h1, h2 = _complex_normal(rng, n), _complex_normal(rng, n)
            oracle = af_beamformer_oracle(h1, h2, params)
            closed = rate_af(h1, h2, af_beamformer(h1, h2, params).matrix, params)
            sv = np.linalg.svd(oracle.matrix, compute_uv=False)
            worst_rank = max(worst_rank, float(sv[1] / sv[0]) if n > 1 else 0.0)
            slack = abs(relay_power(h1, oracle.matrix, params) - params.p_relay) / params.p_relay
            worst_slack = max(worst_slack, slack)
            worst_rate = max(worst_rate, abs(oracle.rate - closed) / closed)
    passed = worst_rank <= 1e-8 and worst_slack <= 1e-9 and worst_rate <= 1e-9
    detail = f"σ2/σ1 {worst_rank:.2g}, power slack {worst_slack:.2g}, rate gap {worst_rate:.2g}"
    return CheckResult(name="af_oracle", passed=passed, detail=detail)


def check_tail_integrals(fast: bool) -> CheckResult:
    """Closed-form I₁, I₂ against adaptive quadrature."""
    params = SystemParams.from_snr_db(1, 10.0)
    top = 3 if fast else 6
    worst = 0.0
    for l_r in range(1, top + 1):
        for l_t in range(1, top + 1):
            aar = aar_params(l_r, l_t, 1.0, 1.0, params)
            closed = aar_df_terms(l_r, l_t, aar)
            quad = aar_df_terms_quadrature(l_r, l_t, aar)
            worst = max(worst, *(abs(c - q) / q for c, q in zip(closed, quad)))
    return CheckResult(name="tail_integrals", passed=worst <= 1e-8, detail=f"max relative error {worst:.3g}")


def check_moment_identity(fast: bool) -> CheckResult:
    """E[(Σ|g_ℓ|)²] = ρ²[1 + (L-1)π/4] by Monte Carlo."""
    rng = make_rng(SEED + 2)
    worst = 0.0
    for num_paths in range(1, 9):
        g = draw_coefficients(rng, num_paths, 1.0, size=100_000)
        estimate = float(np.mean(np.sum(np.abs(g), axis=1) ** 2))
        worst = max(worst, abs(estimate / sum_amplitude_moment(num_paths, 1.0) - 1))
    return CheckResult(name="moment_identity", passed=worst <= 0.02, detail=f"max relative error {worst:.3g}")


def check_bound_dominance(fast: bool) -> CheckResult:
    """Rates at random placements never exceed the deterministic bounds."""
    rng = make_rng(SEED + 3)
    violations = 0
    count = 100 if fast else 1000
    for _ in range(count):
        n = int(rng.integers(1, 5))
        params = SystemParams.from_snr_db(n, float(rng.uniform(0, 20)))
        paths_sr, paths_rd = sample_paths(5, 1.0, rng), sample_paths(5, 1.0, rng)
        rx = Placement(positions=rng.uniform(-5, 5, (n, 2)))
        tx = Placement(positions=rng.uniform(-5, 5, (n, 2)))
        h1, h2 = channel_sr(rx, paths_sr), channel_rd(tx, paths_rd)
        df_bound = rate_df_upper(paths_sr, paths_rd, params)
        af_bound = rate_af_upper(paths_sr, paths_rd, params)
        violations += rate_df(h1, h2, params) > df_bound + 1e-9
        violations += rate_af(h1, h2, af_beamformer(h1, h2, params).matrix, params) > af_bound + 1e-9
    return CheckResult(name="bound_dominance", passed=violations == 0, detail=f"{violations} of {2 * count} violated")


def check_reference_values(fast: bool) -> CheckResult:
    """Average bounds at L = 1, ρ² = 1, P = 10, σ² = 1, N = 1."""
    params = SystemParams(num_antennas=1, p_source=10.0, p_relay=10.0)
    df = aar_df_upper(1, 1, 1.0, 1.0, params)
    af = aar_af_upper(1, 1, 1.0, 1.0, params)
    passed = math.isclose(df, 0.5 * math.log2(6), rel_tol=1e-12) and math.isclose(
        af, 0.5 * math.log2(1 + 100 / 21), rel_tol=1e-12
    )
    return CheckResult(name="reference_values", passed=passed, detail=f"DF {df:.6f}, AF {af:.6f}")


def check_campaign_invariants(fast: bool) -> CheckResult:
    """A small campaign in verification mode for both relaying protocols."""
    failures = []
    for relaying in ("df", "af"):
        config = CampaignConfig(
            relaying=relaying,
            sweep=SweepConfig(region_size=[2.0, 4.0]),
            system=SystemConfig(num_antennas=2, paths_sr=4, paths_rd=4),
            trials=2 if fast else 10,
            base_seed=SEED,
            schemes=["proposed", "fpa", "as", "otpa", "bound_deterministic"],
            verify_invariants=True,
        )
        try:
            result = run_campaign(config, workers=1)
        except MaRelayError as e:
            failures.append(f"{relaying}: {e}")
            continue
        failures.extend(f"{relaying}: {message}" for message in result.errors)
    return CheckResult(name="campaign_invariants", passed=not failures, detail="; ".join(failures) or "ok")


CHECKS: list[Callable[[bool], CheckResult]] = [
    check_reference_values,
    check_gradient,
    check_af_oracle,
    check_tail_integrals,
    check_moment_identity,
    check_bound_dominance,
    check_campaign_invariants,
]


def run_validation(fast: bool = False) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        result = check(fast)
        log = logger.info if result.passed else logger.error
        log("%-20s %s  %s", result.name, "PASS" if result.passed else "FAIL", result.detail)
        results.append(result)
    return results
