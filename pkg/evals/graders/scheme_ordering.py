from opik.evaluation.metrics import BaseMetric
from opik.evaluation.metrics.score_result import ScoreResult

from evals.graders.summary import mean_rates


class SchemeOrdering(BaseMetric):
    """Fraction of sweep values whose mean rates are non-increasing along ``order``."""
    name = "scheme_ordering"

    def score(self, summary: list[dict], expected_scheme_ordering: dict | None = None, **kwargs) -> ScoreResult:
        if expected_scheme_ordering is None:
            return ScoreResult(value=1.0, name=self.name, reason="Not checked for this scenario")

        order = expected_scheme_ordering["order"]
        table = mean_rates(summary)
        if not table:
            return ScoreResult(value=0.0, name=self.name, reason="No successful sweep values")

        broken = []
        for value, means in table.items():
            if any(scheme not in means for scheme in order):
                broken.append(f"{value:g}: missing schemes")
                continue
            rates = [means[scheme] for scheme in order]
            if any(later > earlier for earlier, later in zip(rates, rates[1:])):
                broken.append(f"{value:g}: " + ", ".join(f"{s}={r:.4f}" for s, r in zip(order, rates)))

        held = len(table) - len(broken)
        return ScoreResult(
            value=held / len(table),
            name=self.name,
            reason=f"{' >= '.join(order)} held at {held}/{len(table)}. Broken: {broken}" if broken
            else f"{' >= '.join(order)} held at {held}/{len(table)}",
        )
