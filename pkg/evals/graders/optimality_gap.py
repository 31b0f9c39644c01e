from opik.evaluation.metrics import BaseMetric
from opik.evaluation.metrics.score_result import ScoreResult

from evals.graders.summary import mean_rates


class OptimalityGap(BaseMetric):
    """Fraction of sweep values where the candidate's mean rate is within ``max_gap`` of the reference."""
    name = "optimality_gap"

    def score(self, summary: list[dict], expected_optimality_gap: dict | None = None, **kwargs) -> ScoreResult:
        if expected_optimality_gap is None:
            return ScoreResult(value=1.0, name=self.name, reason="Not checked for this scenario")

        reference = expected_optimality_gap["reference"]
        candidate = expected_optimality_gap["candidate"]
        max_gap = expected_optimality_gap["max_gap"]
        table = mean_rates(summary)
        if not table:
            return ScoreResult(value=0.0, name=self.name, reason="No successful sweep values")

        misses = []
        for value, means in table.items():
            if reference not in means or candidate not in means:
                misses.append(f"{value:g}: missing {reference} or {candidate}")
                continue
            gap = means[reference] - means[candidate]
            if gap > max_gap:
                misses.append(f"{value:g}: gap {gap:.4f}")

        hits = len(table) - len(misses)
        return ScoreResult(
            value=hits / len(table),
            name=self.name,
            reason=f"{hits}/{len(table)} within {max_gap}. Misses: {misses}" if misses
            else f"{hits}/{len(table)} within {max_gap}",
        )
