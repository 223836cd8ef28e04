"""Adapters between plan steps and the model-facing prompt builders."""

from __future__ import annotations

from typing import Any, Mapping

from ..gateway.types import ChatRequest
from ..planner.prompts import build_am_request
from ..planner.types import PlanStep


def build_step_inference_request(
    step: PlanStep, params: Mapping[str, Any], prior_digests: list[dict]
) -> ChatRequest:
    return build_am_request(
        step_tool=step.tool,
        subtask=step.subtask,
        params=dict(params),
        prior_digests=prior_digests,
    )
