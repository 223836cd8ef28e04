"""Confidence-weighted jury pooling with a majority fallback.

For one criterion, each distinct score gets the mean confidence of the
judges who gave it. If the best mean leads the runner-up by at least
epsilon, that score wins (confidence weighting is decisive); otherwise
the pooled score is the plain majority, ties broken toward the lower
score. A jury that agrees on a single score short-circuits.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ..errors import EvalInputError

DEFAULT_EPSILON = 0.05


@dataclass(frozen=True)
class JudgeVerdict:
    judge: str
    criterion: str
    score: int
    confidence: float

    def __post_init__(self):
        if not 1 <= self.score <= 5:
            raise EvalInputError(f"score must be in 1..5, got {self.score}")
        if not 0.0 <= self.confidence <= 1.0:
            raise EvalInputError(f"confidence must be in [0, 1], got {self.confidence}")


@dataclass(frozen=True)
class PooledScore:
    criterion: str
    score: int
    method: str  # "confidence_weighted" | "majority_fallback"
    mean_confidence_by_score: dict[int, float]

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion,
            "score": self.score,
            "method": self.method,
            "mean_confidence_by_score": {
                str(s): c for s, c in sorted(self.mean_confidence_by_score.items())
            },
        }


def pool_jury(verdicts: Sequence[JudgeVerdict], epsilon: float = DEFAULT_EPSILON) -> PooledScore:
    if not verdicts:
        raise EvalInputError("cannot pool an empty verdict list")
    criterion = verdicts[0].criterion
    if any(v.criterion != criterion for v in verdicts):
        raise EvalInputError("all verdicts must target the same criterion")

    sums: dict[int, float] = {}
    counts: Counter[int] = Counter()
    for v in verdicts:  # accumulate in input order: deterministic floats
        sums[v.score] = sums.get(v.score, 0.0) + v.confidence
        counts[v.score] += 1
    means = {score: sums[score] / counts[score] for score in sums}

    if len(means) == 1:
        score = next(iter(means))
        return PooledScore(criterion, score, "confidence_weighted", means)

    # Rank distinct scores by mean confidence, lower score first on ties.
    ranked = sorted(means, key=lambda s: (-means[s], s))
    top, second = ranked[0], ranked[1]
    if means[top] - means[second] >= epsilon:
        return PooledScore(criterion, top, "confidence_weighted", means)

    best_count = max(counts.values())
    majority = min(score for score, count in counts.items() if count == best_count)
    return PooledScore(criterion, majority, "majority_fallback", means)
