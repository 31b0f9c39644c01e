from opik.evaluation.metrics import BaseMetric
from opik.evaluation.metrics.score_result import ScoreResult

from evals.graders.summary import mean_rates


class ImprovementBracket(BaseMetric):
    """1.0 when the reference's percentage gain over the baseline lies in [low_pct, high_pct]."""
    name = "improvement_bracket"

    def score(self, summary: list[dict], expected_improvement: dict | None = None, **kwargs) -> ScoreResult:
        if expected_improvement is None:
            return ScoreResult(value=1.0, name=self.name, reason="Not checked for this scenario")

        expected = expected_improvement
        means = mean_rates(summary).get(float(expected["sweep_value"]), {})
        reference, baseline = means.get(expected["reference"]), means.get(expected["baseline"])
        if reference is None or not baseline:
            return ScoreResult(value=0.0, name=self.name,
                               reason=f"Missing {expected['reference']} or {expected['baseline']} "
                                      f"at {expected['sweep_value']}")

        gain = 100 * (reference - baseline) / baseline
        ok = expected["low_pct"] <= gain <= expected["high_pct"]
        return ScoreResult(
            value=1.0 if ok else 0.0,
            name=self.name,
            reason=f"{expected['reference']} over {expected['baseline']}: {gain:.1f}% "
                   f"(bracket [{expected['low_pct']}, {expected['high_pct']}])",
        )
