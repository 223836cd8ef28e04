"""Jury grading: one model call per (judge, criterion).

Malformed verdicts get one repair re-prompt; a verdict that is still
malformed becomes an abstention and is excluded from pooling, never
imputed. Judges run concurrently under the gateway's limits.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..composer import ComposedResponse
from ..errors import SqaError
from ..executor.trace import RunTrace
from ..gateway.core import GatewaySession
from ..planner.hlpm import parse_json_reply
from ..planner.prompts import build_judge_request, repair_request
from .pooling import JudgeVerdict
from .rubric import CRITERIA, Rubric

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Abstention:
    judge: str
    criterion: str
    reason: str


def _parse_verdict(text: str) -> tuple[int, float] | str:
    try:
        obj = parse_json_reply(text)
    except json.JSONDecodeError as exc:
        return f"not valid JSON ({exc.msg})"
    score, confidence = obj.get("score"), obj.get("confidence")
    if not isinstance(score, int) or isinstance(score, bool) or not 1 <= score <= 5:
        return f"score must be an integer in 1..5, got {score!r}"
    if not isinstance(confidence, (int, float)) or isinstance(confidence, bool) or not 0 <= confidence <= 1:
        return f"confidence must be a number in [0, 1], got {confidence!r}"
    return score, float(confidence)


def judge_response(
    question: str,
    response: ComposedResponse,
    trace: RunTrace,
    rubric: Rubric,
    jury: list[str],
    session: GatewaySession,
    serial: bool = False,
) -> tuple[list[JudgeVerdict], list[Abstention]]:
    if not jury:
        raise SqaError("at least one judge profile is required")
    data_digest = json.dumps(trace.step_digests(), sort_keys=True)

    def grade(judge_name: str, criterion: str):
        request = build_judge_request(
            question, response.markdown, criterion, list(rubric.levels(criterion)), data_digest
        )
        completion = session.chat(request, judge_name, stage=f"judge_{criterion}")
        parsed = _parse_verdict(completion.text)
        if isinstance(parsed, str):
            retry = session.chat(
                repair_request(request, completion.text, parsed),
                judge_name,
                stage=f"judge_{criterion}_repair",
            )
            parsed = _parse_verdict(retry.text)
        if isinstance(parsed, str):
            logger.info("judge %s abstains on %s: %s", judge_name, criterion, parsed)
            return Abstention(judge=judge_name, criterion=criterion, reason=parsed)
        score, confidence = parsed
        return JudgeVerdict(judge=judge_name, criterion=criterion, score=score, confidence=confidence)

    tasks = [(judge_name, criterion) for judge_name in jury for criterion in CRITERIA]
    if serial:
        outcomes = [grade(j, c) for j, c in tasks]
    else:
        with ThreadPoolExecutor(max_workers=min(8, len(tasks))) as pool:
            outcomes = list(pool.map(lambda jc: grade(*jc), tasks))

    verdicts = sorted(
        (o for o in outcomes if isinstance(o, JudgeVerdict)),
        key=lambda v: (v.judge, v.criterion),
    )
    abstentions = sorted(
        (o for o in outcomes if isinstance(o, Abstention)),
        key=lambda a: (a.judge, a.criterion),
    )
    return verdicts, abstentions
