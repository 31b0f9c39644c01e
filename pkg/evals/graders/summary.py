"""Lookups over the summary records a campaign task returns."""
import math


def mean_rates(summary: list[dict]) -> dict[float, dict[str, float]]:
    """{sweep_value: {scheme: mean rate}}; error rows are dropped."""
    table: dict[float, dict[str, float]] = {}
    for row in summary:
        if row["scheme"] == "error" or math.isnan(row["mean_rate_bps_hz"]):
            continue
        table.setdefault(float(row["sweep_value"]), {})[row["scheme"]] = float(row["mean_rate_bps_hz"])
    return table
