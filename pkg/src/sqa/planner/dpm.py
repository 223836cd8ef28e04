"""Detailed planning: one model call elaborates the outline into a
validated list of data retrieval steps.

The model never writes query strings; it emits tool names and parameter
maps, and the executor assembles queries rule-based. A plan that fails
validation gets exactly one repair re-prompt carrying the machine
violations before the stage gives up.
"""

from __future__ import annotations

import json
import logging

from ..corpus import Corpus
from ..errors import InvalidPlanError, PlannerParseError
from ..gateway.core import PLANNER_PROFILE, GatewaySession
from .hlpm import parse_json_reply
from .prompts import build_dpm_request, repair_request
from .types import Plan, PlanShapeError, Resolutions, TaggedQuestion, plan_from_json
from .validate import validate_plan

logger = logging.getLogger(__name__)


def run_dpm(
    tagged: TaggedQuestion,
    resolutions: Resolutions,
    corpus: Corpus,
    session: GatewaySession,
    profile: str = PLANNER_PROFILE,
) -> Plan:
    request = build_dpm_request(tagged.question, tagged.outline, resolutions.resolved)
    completion = session.chat(request, profile, stage="dpm")

    plan, problem = _try_parse(completion.text, resolutions)
    if plan is not None:
        report = validate_plan(plan, corpus)
        if report.ok:
            return plan
        problem = "plan validation failed:\n" + "\n".join(
            f"- step {v.step_id}: [{v.code}] {v.message}" for v in report.violations
        )

    repair = repair_request(request, completion.text, problem)
    retry = session.chat(repair, profile, stage="dpm_repair")
    plan, problem = _try_parse(retry.text, resolutions)
    if plan is None:
        raise PlannerParseError(f"dpm: {problem}")
    report = validate_plan(plan, corpus)
    if not report.ok:
        raise InvalidPlanError(
            "plan failed validation after repair: "
            + "; ".join(f"step {v.step_id} [{v.code}] {v.message}" for v in report.violations)
        )
    return plan


def _try_parse(text: str, resolutions: Resolutions) -> tuple[Plan | None, str]:
    try:
        obj = parse_json_reply(text)
    except json.JSONDecodeError as exc:
        return None, f"not valid JSON ({exc.msg})"
    try:
        return plan_from_json(obj, resolutions.resolved), ""
    except PlanShapeError as exc:
        return None, str(exc)
