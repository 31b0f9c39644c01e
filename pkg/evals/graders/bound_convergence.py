from opik.evaluation.metrics import BaseMetric
from opik.evaluation.metrics.score_result import ScoreResult

from evals.graders.summary import mean_rates


class BoundConvergence(BaseMetric):
    """1.0 when the candidate's mean rate sits strictly below the bound and within ``rel_tol`` of it."""
    name = "bound_convergence"

    def score(self, summary: list[dict], expected_bound_convergence: dict | None = None, **kwargs) -> ScoreResult:
        if expected_bound_convergence is None:
            return ScoreResult(value=1.0, name=self.name, reason="Not checked for this scenario")

        expected = expected_bound_convergence
        means = mean_rates(summary).get(float(expected["sweep_value"]), {})
        candidate, bound = means.get(expected["candidate"]), means.get(expected["bound"])
        if candidate is None or bound is None:
            return ScoreResult(value=0.0, name=self.name,
                               reason=f"Missing {expected['candidate']} or {expected['bound']} "
                                      f"at {expected['sweep_value']}")

        gap = (bound - candidate) / bound
        ok = candidate < bound and gap <= expected["rel_tol"]
        return ScoreResult(
            value=1.0 if ok else 0.0,
            name=self.name,
            reason=f"{expected['candidate']} {candidate:.4f} vs {expected['bound']} {bound:.4f} "
                   f"(relative gap {gap:.2%}, tolerance {expected['rel_tol']:.0%})",
        )
