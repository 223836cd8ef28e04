"""Evaluation run orchestration and report assembly.

For every question the runner executes both pipeline modes, has the
jury grade each response per criterion, pools the verdicts, detects
critical errors against hand-authored oracle parameters, and finally
assembles a report: per-criterion score means and standard deviations
per mode, significance tests between modes, pairwise judge agreement,
pooling method counts, and critical error counts.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

from ..composer import ComposedResponse
from ..executor.trace import RunTrace
from ..query.build import QueryParams, params_from_raw
from .critical import detect_critical_error
from .dataset import EvalQuestion
from .judge import Abstention, judge_response
from .pooling import DEFAULT_EPSILON, JudgeVerdict, PooledScore, pool_jury
from .rubric import CRITERIA, Rubric
from .stats import mann_whitney_u, weighted_kappa

logger = logging.getLogger(__name__)

MODES = ("workflow", "baseline")

# (response, trace) for one question in one mode.
RunFn = Callable[[str, str], tuple[ComposedResponse, RunTrace]]


@dataclass
class QuestionOutcome:
    question: EvalQuestion
    mode: str
    response: ComposedResponse
    trace: RunTrace
    verdicts: list[JudgeVerdict] = field(default_factory=list)
    abstentions: list[Abstention] = field(default_factory=list)
    pooled: dict[str, PooledScore] = field(default_factory=dict)
    critical_error: bool = False


def load_oracles(path: str | Path) -> dict[str, QueryParams]:
    """JSONL of {"id": <question id>, "params": <raw query params>}."""
    oracles: dict[str, QueryParams] = {}
    for line in Path(path).read_text("utf-8").splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        params, _, _ = params_from_raw(obj["params"], lenient=True)
        oracles[str(obj["id"])] = params
    return oracles


def _mean_std(values: list[int | float]) -> tuple[float, float]:
    if not values:
        return (math.nan, math.nan)
    mean = sum(values) / len(values)
    if len(values) < 2:
        return (mean, 0.0)
    var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return (mean, math.sqrt(var))


def run_evaluation(
    questions: list[EvalQuestion],
    run_fn: RunFn,
    rubric: Rubric,
    jury: list[str],
    judge_session_factory,
    oracles: Mapping[str, QueryParams] | None = None,
    builder=None,
    engine=None,
    alpha: float = 0.05,
    epsilon: float = DEFAULT_EPSILON,
    serial_judging: bool = False,
) -> dict:
    outcomes: list[QuestionOutcome] = []
    for question in questions:
        for mode in MODES:
            response, trace = run_fn(question.question, mode)
            outcome = QuestionOutcome(question=question, mode=mode, response=response, trace=trace)
            session = judge_session_factory()
            outcome.verdicts, outcome.abstentions = judge_response(
                question.question, response, trace, rubric, jury, session, serial=serial_judging
            )
            for criterion in CRITERIA:
                per_criterion = [v for v in outcome.verdicts if v.criterion == criterion]
                if per_criterion:
                    outcome.pooled[criterion] = pool_jury(per_criterion, epsilon=epsilon)
            if oracles is not None and question.id in oracles and builder is not None:
                outcome.critical_error = detect_critical_error(
                    trace, oracles[question.id], builder, engine
                )
            outcomes.append(outcome)
            logger.info(
                "evaluated %s [%s]: pooled=%s critical=%s",
                question.id,
                mode,
                {c: p.score for c, p in outcome.pooled.items()},
                outcome.critical_error,
            )
    return build_report(outcomes, jury, alpha=alpha)


def build_report(outcomes: list[QuestionOutcome], jury: list[str], alpha: float = 0.05) -> dict:
    criteria_block: dict[str, dict] = {}
    for criterion in CRITERIA:
        block: dict[str, object] = {}
        scores_by_mode: dict[str, list[int]] = {}
        for mode in MODES:
            scores = [
                o.pooled[criterion].score
                for o in outcomes
                if o.mode == mode and criterion in o.pooled
            ]
            scores_by_mode[mode] = scores
            mean, std = _mean_std(scores)
            block[mode] = {"mean": mean, "std": std, "n": len(scores)}
        if all(scores_by_mode[m] for m in MODES):
            test = mann_whitney_u(scores_by_mode["workflow"], scores_by_mode["baseline"], alpha)
            block["significance"] = test.to_json()
        criteria_block[criterion] = block

    pooling_counts = {"confidence_weighted": 0, "majority_fallback": 0}
    for outcome in outcomes:
        for pooled in outcome.pooled.values():
            pooling_counts[pooled.method] += 1

    critical = {
        mode: sum(1 for o in outcomes if o.mode == mode and o.critical_error) for mode in MODES
    }
    totals = {mode: sum(1 for o in outcomes if o.mode == mode) for mode in MODES}

    # Pairwise judge agreement per criterion and mode, over raw scores
    # on the questions both judges actually scored.
    kappa_block: dict[str, dict] = {}
    for criterion in CRITERIA:
        kappa_block[criterion] = {}
        for i, judge_a in enumerate(jury):
            for judge_b in jury[i + 1 :]:
                pair_key = f"{judge_a}|{judge_b}"
                kappa_block[criterion][pair_key] = {}
                for mode in MODES:
                    a_scores, b_scores = [], []
                    for outcome in outcomes:
                        if outcome.mode != mode:
                            continue
                        va = {v.judge: v.score for v in outcome.verdicts if v.criterion == criterion}
                        if judge_a in va and judge_b in va:
                            a_scores.append(va[judge_a])
                            b_scores.append(va[judge_b])
                    if a_scores:
                        result = weighted_kappa(a_scores, b_scores, k=5)
                        kappa_block[criterion][pair_key][mode] = result.kappa
                    else:
                        kappa_block[criterion][pair_key][mode] = None

    abstention_count = sum(len(o.abstentions) for o in outcomes)
    return {
        "questions": len({o.question.id for o in outcomes}),
        "runs": totals,
        "criteria": criteria_block,
        "pooling_methods": pooling_counts,
        "critical_errors": critical,
        "judge_agreement": kappa_block,
        "abstentions": abstention_count,
        "alpha": alpha,
    }
