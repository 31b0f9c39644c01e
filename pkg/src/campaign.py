"""Seeded Monte Carlo campaigns over one sweep axis, with CSV summaries.

Every trial draws its channel realization from a child seed of
(base_seed, sweep value, trial index), so trials are independent of each other,
of the worker count, and of which other sweep values are configured.
"""
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path

import numpy as np
import opik
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from src.builder import CampaignBuilder
from src.config import AppConfig, CampaignConfig
from src.core.channel import ChannelRealization
from src.core.errors import InvariantViolation
from src.core.results import SchemeOutcome, TrialResult
from src.schemes.base import TrialContext
from src.services.baselines.layouts import fpa_layout, selection_candidates
from src.services.optimizer.pga import feasible_init, optimize_af, optimize_df

logger = logging.getLogger("ma_relay.campaign")

SUMMARY_COLUMNS = ["sweep_name", "sweep_value", "scheme", "mean_rate_bps_hz", "std_err", "trials", "base_seed"]
TRIAL_COLUMNS = ["sweep_name", "sweep_value", "trial_index", "seed", "scheme", "rate_bps_hz"]
FLOAT_FORMAT = "%.9g"
ERROR_SCHEME = "error"
RATE_TOL = 1e-9
# achievable-rate schemes whose placements must satisfy the movable-antenna constraints
_MOVABLE = ("proposed", "otpa", "grid_exhaustive")


def trial_seed(base_seed: int, sweep_value: float, trial_index: int) -> int:
    """63-bit child seed from SeedSequence(base_seed, spawn_key=(bits(sweep_value), trial_index))."""
    value_key = int(np.array(sweep_value, dtype=np.float64).view(np.uint64))
    seq = np.random.SeedSequence(entropy=base_seed, spawn_key=(value_key, trial_index))
    return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def make_context(config: CampaignConfig, sweep_value: float, trial_index: int) -> TrialContext:
    system = config.system
    seed = trial_seed(config.base_seed, sweep_value, trial_index)
    return TrialContext(
        config=config,
        sweep_value=sweep_value,
        trial_index=trial_index,
        realization=ChannelRealization.from_seed(seed, system.paths_sr, system.paths_rd,
                                                 system.rho1_sq, system.rho2_sq),
        params=config.params_at(sweep_value),
        region=config.region_at(sweep_value),
    )


def preflight(config: CampaignConfig) -> None:
    """Raise InfeasiblePlacementError if some sweep value cannot host the configured layouts."""
    for value in config.sweep.values:
        n, region = config.num_antennas_at(value), config.region_at(value)
        if config.init_mode == "fpa" or "fpa" in config.schemes:
            layout = fpa_layout(n, region)
            if config.init_mode == "fpa":
                layout.check_feasible(region)
        if config.init_mode != "fpa":
            feasible_init(n, region, config.init_mode, seed=config.base_seed)
        if "as" in config.schemes:
            selection_candidates(n, region)


def _tol(reference: float) -> float:
    return RATE_TOL * max(1.0, abs(reference))


def _non_decreasing(trace: list[float]) -> bool:
    return all(after >= before - _tol(before) for before, after in zip(trace, trace[1:]))


def check_invariants(ctx: TrialContext, outcomes: dict[str, SchemeOutcome], builder: CampaignBuilder) -> None:
    """Raise InvariantViolation if any dominance, monotonicity or feasibility property fails."""
    extra = {name: scheme(ctx) for name, scheme in builder.build_checks().items() if name not in outcomes}
    every = {**outcomes, **extra}
    fpa = every["fpa"].rate
    bound = every["bound_deterministic"].rate
    failures = []

    for name, outcome in outcomes.items():
        if name.startswith("bound_"):
            continue
        if outcome.rate > bound + _tol(bound):
            failures.append(f"{name} rate {outcome.rate!r} exceeds the deterministic bound {bound!r}")
        for label, trace in (("receive", outcome.trace_rx), ("transmit", outcome.trace_tx)):
            if not _non_decreasing(trace):
                failures.append(f"{name} {label} objective trace decreased: {trace}")
        if name in _MOVABLE:
            for placement in (outcome.placement_rx, outcome.placement_tx):
                if placement is not None:
                    failures.extend(f"{name}: {p}" for p in placement.violations(ctx.region))

    fpa_initialized = ctx.config.init_mode == "fpa"
    for name in ("proposed", "otpa") if fpa_initialized else ():
        if name in outcomes and outcomes[name].rate < fpa - _tol(fpa):
            failures.append(f"FPA-initialized {name} rate {outcomes[name].rate!r} is below FPA {fpa!r}")
    if "as" in outcomes and outcomes["as"].rate < fpa - _tol(fpa):
        failures.append(f"AS rate {outcomes['as'].rate!r} is below FPA {fpa!r}")

    if "otpa" in outcomes:
        otpa = outcomes["otpa"]
        optimize = optimize_df if ctx.relaying == "df" else optimize_af
        refined = optimize(ctx.realization.paths_sr, ctx.realization.paths_rd, ctx.region, ctx.params,
                           ctx.schedule, init_rx=otpa.placement_rx, init_tx=otpa.placement_tx)
        if refined.rate < otpa.rate - _tol(otpa.rate):
            failures.append(f"two-stage refinement of OTPA ({refined.rate!r}) is below OTPA ({otpa.rate!r})")

    if failures:
        raise InvariantViolation(
            f"sweep value {ctx.sweep_value!r}, trial {ctx.trial_index}: " + "; ".join(failures)
        )


@opik.track(name="run_trial")
def run_trial(config: CampaignConfig, sweep_value: float, trial_index: int) -> TrialResult:
    """Evaluate every configured scheme on one realization."""
    ctx = make_context(config, sweep_value, trial_index)
    builder = CampaignBuilder(config)
    outcomes: dict[str, SchemeOutcome] = {}
    for scheme in builder.build():
        if ctx.verify:
            rederived = make_context(config, sweep_value, trial_index).realization
            if rederived != ctx.realization:
                raise InvariantViolation(f"scheme {scheme.name} would see a different realization")
        outcomes[scheme.name] = scheme(ctx)
    if ctx.verify:
        check_invariants(ctx, outcomes, builder)

    logger.debug("trial %s=%g #%d done", config.sweep_name, sweep_value, trial_index)
    return TrialResult(
        sweep_name=config.sweep_name,
        sweep_value=sweep_value,
        trial_index=trial_index,
        seed=ctx.realization.seed,
        rates={name: outcome.rate for name, outcome in outcomes.items()},
    )


class CampaignResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    summary: pd.DataFrame
    trials: pd.DataFrame
    errors: list[str] = Field(default_factory=list)

    @property
    def has_errors(self) -> bool:
        return bool(self.errors)

    def write_summary(self, path: str | Path) -> None:
        write_summary(self.summary, path)

    def write_trials(self, path: str | Path) -> None:
        self.trials.to_csv(path, index=False, na_rep="nan")


def _trial_rows(result: TrialResult) -> list[dict]:
    return [
        {
            "sweep_name": result.sweep_name,
            "sweep_value": result.sweep_value,
            "trial_index": result.trial_index,
            "seed": result.seed,
            "scheme": scheme,
            "rate_bps_hz": rate,
        }
        for scheme, rate in result.rates.items()
    ]


def _error_row(sweep_name: str, sweep_value: float) -> dict:
    # trial_index and seed of -1 mark a failed sweep value
    return {"sweep_name": sweep_name, "sweep_value": sweep_value, "trial_index": -1, "seed": -1,
            "scheme": ERROR_SCHEME, "rate_bps_hz": math.nan}


def summarize(trials: pd.DataFrame, base_seed: int) -> pd.DataFrame:
    """Per (sweep value, scheme) mean rate and standard error, in first-seen order."""
    rows = []
    for (sweep_name, sweep_value), group in trials.groupby(["sweep_name", "sweep_value"], sort=False):
        if (group["scheme"] == ERROR_SCHEME).any():
            rows.append({"sweep_name": sweep_name, "sweep_value": sweep_value, "scheme": ERROR_SCHEME,
                         "mean_rate_bps_hz": math.nan, "std_err": math.nan, "trials": 0, "base_seed": base_seed})
            continue
        for scheme, per_scheme in group.groupby("scheme", sort=False):
            rates = per_scheme.sort_values("trial_index", kind="stable")["rate_bps_hz"].to_numpy(dtype=float)
            n = len(rates)
            std_err = float(np.std(rates, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
            rows.append({"sweep_name": sweep_name, "sweep_value": sweep_value, "scheme": scheme,
                         "mean_rate_bps_hz": float(np.mean(rates)), "std_err": std_err, "trials": n,
                         "base_seed": base_seed})
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def write_summary(summary: pd.DataFrame, path: str | Path) -> None:
    summary.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="nan")


def aggregate_trials(trials_csv: str | Path | pd.DataFrame, base_seed: int) -> pd.DataFrame:
    """Rebuild the summary table from a per-trial CSV written by ``write_trials``."""
    if isinstance(trials_csv, pd.DataFrame):
        return summarize(trials_csv, base_seed)
    return summarize(pd.read_csv(trials_csv, float_precision="round_trip"), base_seed)


def improvement_table(summary: pd.DataFrame, reference: str = "proposed") -> pd.DataFrame:
    """Percentage gain of ``reference`` over every other achievable-rate scheme, per sweep value."""
    rows = []
    for (sweep_name, sweep_value), group in summary.groupby(["sweep_name", "sweep_value"], sort=False):
        means = dict(zip(group["scheme"], group["mean_rate_bps_hz"]))
        if reference not in means:
            continue
        for scheme, mean in means.items():
            if scheme in (reference, ERROR_SCHEME) or scheme.startswith("bound_"):
                continue
            gain = 100 * (means[reference] - mean) / mean if mean > 0 else math.nan
            rows.append({"sweep_name": sweep_name, "sweep_value": sweep_value, "scheme": scheme,
                         "improvement_pct": gain})
    return pd.DataFrame(rows, columns=["sweep_name", "sweep_value", "scheme", "improvement_pct"])


@opik.track(name="run_campaign")
def run_campaign(config: CampaignConfig, workers: int | None = None, progress: bool = False) -> CampaignResult:
    """Run ``trials`` trials per sweep value; output is ordered by (sweep value, trial index)."""
    workers = workers or AppConfig().workers
    values = config.sweep.values
    tasks = [(v_index, value, t) for v_index, value in enumerate(values) for t in range(config.trials)]
    results: dict[tuple[int, int], TrialResult] = {}
    failures: dict[int, dict[int, str]] = {}

    logger.info("campaign: %s sweep over %s, %d trials each, %d worker(s)",
                config.sweep_name, values, config.trials, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(run_trial, config, value, t): (v_index, t) for v_index, value, t in tasks}
        bar = tqdm(as_completed(futures), total=len(futures), desc="trials",
                   disable=not (progress and sys.stderr.isatty()))
        for future in bar:
            v_index, t = futures[future]
            try:
                results[(v_index, t)] = future.result()
            except InvariantViolation:
                for pending in futures:
                    pending.cancel()
                raise
            except Exception as e:
                failures.setdefault(v_index, {})[t] = f"{type(e).__name__}: {e}"

    rows: list[dict] = []
    errors = []
    for v_index, value in enumerate(values):
        if v_index in failures:
            first = min(failures[v_index])
            message = f"{config.sweep_name}={value:g} aborted at trial {first} ({failures[v_index][first]})"
            logger.warning(message)
            errors.append(message)
            rows.append(_error_row(config.sweep_name, value))
            continue
        for t in range(config.trials):
            rows.extend(_trial_rows(results[(v_index, t)]))
        logger.info("%s=%g: %d trials done", config.sweep_name, value, config.trials)

    trials = pd.DataFrame(rows, columns=TRIAL_COLUMNS)
    return CampaignResult(summary=summarize(trials, config.base_seed), trials=trials, errors=errors)
