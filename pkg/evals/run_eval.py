"""
Main evaluation runner. Uses opik.evaluate() to run the full-scale campaign
scenarios and score the published simulation claims.

Usage:
    python -m evals.run_eval
    python -m evals.run_eval --category scheme_ordering
"""
import argparse
import json
import logging
from pathlib import Path

import opik
from opik import Opik
from opik.evaluation import evaluate

from evals.graders.bound_convergence import BoundConvergence
from evals.graders.improvement import ImprovementBracket
from evals.graders.optimality_gap import OptimalityGap
from evals.graders.scheme_ordering import SchemeOrdering
from src.campaign import improvement_table, run_campaign
from src.config import AppConfig, CampaignConfig

SCENARIOS_DIR = Path(__file__).parent / "scenarios"


def load_scenarios(category: str | None = None) -> list[dict]:
    """Load scenarios from JSON files, optionally filtered by category."""
    scenarios = []
    for path in sorted(SCENARIOS_DIR.glob("*.json")):
        with open(path) as f:
            data = json.load(f)
        for s in data["scenarios"]:
            if category is None or s["category"] == category:
                scenarios.append(s)
    return scenarios


def build_eval_task(config: AppConfig):
    """Build the task function that opik.evaluate() will call for each scenario."""

    @opik.track(name="ma_relay_campaign")
    def eval_task(scenario: dict) -> dict:
        campaign = CampaignConfig(**scenario["input"]["campaign"])
        result = run_campaign(campaign, workers=config.workers)
        expected = scenario["expected"]

        return {
            "summary": result.summary.to_dict(orient="records"),
            "improvement": improvement_table(result.summary).to_dict(orient="records"),
            "errors": result.errors,
            # Pass through expected values for graders
            "expected_optimality_gap": expected.get("optimality_gap"),
            "expected_bound_convergence": expected.get("bound_convergence"),
            "expected_scheme_ordering": expected.get("scheme_ordering"),
            "expected_improvement": expected.get("improvement"),
        }

    return eval_task


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--category", type=str, default=None)
    parser.add_argument("--experiment-name", type=str, default=None)
    args = parser.parse_args()

    config = AppConfig.for_eval()
    logging.basicConfig(level=config.log_level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    # Load scenarios into Opik dataset
    scenarios = load_scenarios(args.category)
    client = Opik(project_name=config.opik_project)
    dataset_name = f"ma-relay-scenarios-{args.category}" if args.category else "ma-relay-scenarios-all"
    # Delete existing dataset to avoid accumulating stale items across runs
    try:
        client.delete_dataset(dataset_name)
    except Exception:
        pass
    dataset = client.create_dataset(dataset_name)

    # Opik requires 'id' to be a UUID; rename our string ids to 'scenario_id'
    dataset_items = []
    for s in scenarios:
        item = {**s}
        item["scenario_id"] = item.pop("id", None)
        dataset_items.append(item)
    dataset.insert(dataset_items)

    # Trials already run in parallel inside each campaign
    evaluate(
        dataset=dataset,
        task=build_eval_task(config),
        scoring_metrics=[
            OptimalityGap(),
            BoundConvergence(),
            SchemeOrdering(),
            ImprovementBracket(),
        ],
        experiment_name=args.experiment_name or "ma-relay-claims",
        experiment_config={
            "workers": config.workers,
            "category": args.category or "all",
        },
        project_name=config.opik_project,
        task_threads=1,
    )


if __name__ == "__main__":
    main()
