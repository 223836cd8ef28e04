"""Prompt builders for every model-facing stage.

Each builder is a pure function of its inputs: no timestamps, ids, or
other run-specific material ever enters a prompt, so identical inputs
produce identical requests. Mock scripts rely on that.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping

from ..corpus import EntityRef, EntityType
from ..gateway.toolschema import PLANNING_TOOLS
from ..gateway.types import ChatRequest, Message, ToolSchema

ENTITY_TYPE_LIST = ", ".join(t.value for t in EntityType)

HLPM_SYSTEM = f"""You are the high-level planning stage of a scientometric question answering system.

Given a user question about academic entities, reply with a single JSON object:
{{"tags": [{{"text": "<exact substring of the question>", "type": "<one of {ENTITY_TYPE_LIST}>"}}],
 "outline": ["<abstract step>", "..."]}}

Rules:
- Tag every mention of a supported entity type. Articles are not taggable.
- The outline decomposes the question into abstract data-gathering steps.
- The outline must not mention tool names, parameter names, or any other
  implementation detail. Describe what to find, not how to call anything.
- Reply with JSON only."""


def _render_tools(tools: Iterable[ToolSchema]) -> str:
    blocks = []
    for tool in tools:
        blocks.append(
            f"### {tool.name}\n{tool.description}\nParameters (JSON Schema):\n"
            + json.dumps(dict(tool.parameters), indent=2, sort_keys=True)
        )
    return "\n\n".join(blocks)


DPM_FEW_SHOT = """Example question: "Which institutions publish the most on Machine Learning, and what are the top venues of the leading institution?"
Example resolved entities: {"Machine Learning": {"id": "T02", "type": "TOPIC"}}
Example plan:
{"steps": [
  {"id": 1, "tool": "faceted_article_search", "subtask": "rank institutions publishing on the topic",
   "depends_on": [], "params": {"filters": [{"type": "TOPIC", "id": "T02"}], "facet_type": "INSTITUTION", "top_n": 10}},
  {"id": 2, "tool": "faceted_article_search", "subtask": "top venues of the leading institution",
   "depends_on": [1], "params": {"filters": [{"type": "INSTITUTION", "id": "$step1.top_entity_id"}], "facet_type": "VENUE", "top_n": 5}}
]}"""

DPM_SYSTEM = f"""You are the detailed planning stage of a scientometric question answering system.

Turn the given outline into a low-level plan: a JSON object with a "steps" list.
Each step has exactly these fields:
- "id": 1-based contiguous integer
- "tool": the tool to call
- "subtask": what this step is for, in plain words
- "depends_on": list of earlier step ids this step needs results from
- "params": arguments for the tool

Available tools:

{_render_tools(PLANNING_TOOLS)}

Rules:
- Use entity ids from the resolved entity list, never surface names.
- Do not write query strings; queries are assembled from params later.
- A value that must come from an earlier step's results is written as a
  placeholder "$step<k>.<path>", for example "$step1.top_entity_id" (the
  top-ranked entity of a facet step) or "$step1.article_ids" (the ids of
  an article step). List <k> in depends_on.
- Independent steps must not declare dependencies; they run concurrently.
- Reply with JSON only.

{DPM_FEW_SHOT}"""

AM_SYSTEM = f"""You are the action stage of a scientometric question answering system.
A plan step needs parameter values inferred from earlier step results.
Call the step's tool exactly once with fully literal parameters (no placeholders).

Available tools:

{_render_tools(PLANNING_TOOLS)}"""

BASELINE_SYSTEM = f"""You answer scientometric questions by calling one data retrieval tool.
Pick the tool and parameters that best retrieve the data needed for the question.

Available tools:

{_render_tools(PLANNING_TOOLS)}"""

WM_SYSTEM = """You are the writing stage of a scientometric question answering system.
Compose the final markdown answer for the user, grounded strictly in the
retrieved data given to you.

Requirements:
- Structure: a short summary section first, then the factual data
  (markdown tables or lists), then a brief conclusion, then a final
  "### References" section.
- Reference every entity and article you mention in-line as a markdown
  link of the form [Display Name](Type/ID), where Type is one of
  Author, Institution, Venue, Topic, SubjectArea, SDG, or Paper, and ID
  is the id exactly as it appears in the retrieved data.
- Never state a number or a name that is absent from the retrieved data.
  Do not fill gaps with your own knowledge.
- If the retrieved data is empty, say clearly that no data was retrieved
  and do not invent an answer."""

VM_DECIDE_SYSTEM = """You decide whether charts would make a data analysis easier to read.
Reply with a single JSON object:
{"wanted": true|false, "rationale": "<one sentence>", "chart_types": ["bar"|"grouped_bar"|"line"|"pie", ...]}
Only recommend charts when the retrieved data has enough comparable numbers to plot.
Reply with JSON only."""

VM_CHARTS_SYSTEM = """You produce chart specifications for a data analysis, as JSON:
{"charts": [{"chart_type": "bar"|"grouped_bar"|"line"|"pie",
             "title": "<title>",
             "x": {"label": "<axis label>", "categories": ["..."]},
             "series": [{"label": "<series label>", "values": [<numbers>]}],
             "source_step_ids": [<step ids the numbers come from>]}]}

Rules:
- Every series must have exactly one value per x category.
- Every plotted number must appear verbatim in the retrieved data.
- Pie charts take exactly one series of non-negative values.
- Reply with JSON only."""

JUDGE_SYSTEM = """You are one member of a panel grading the answer of a scientometric
question answering system against a rubric criterion.

Score the answer from 1 (worst) to 5 (best) for the criterion below, and
state how confident you are in your score on a 0 to 1 scale.
Reply with a single JSON object: {"score": <1-5>, "confidence": <0-1>}
Reply with JSON only."""


def build_hlpm_request(question: str) -> ChatRequest:
    return ChatRequest(
        system_prompt=HLPM_SYSTEM,
        messages=(Message(role="user", content=question),),
        response_format="json_object",
    )


def render_resolutions(resolved: Mapping[str, EntityRef]) -> str:
    table = {
        text: {"id": ref.id, "type": ref.type.value, "name": ref.name}
        for text, ref in resolved.items()
    }
    return json.dumps(table, sort_keys=True)


def build_dpm_request(
    question: str, outline: list[str], resolved: Mapping[str, EntityRef]
) -> ChatRequest:
    content = (
        f"Question: {question}\n"
        f"Outline:\n" + "\n".join(f"{i}. {line}" for i, line in enumerate(outline, 1))
        + f"\nResolved entities: {render_resolutions(resolved)}"
    )
    return ChatRequest(
        system_prompt=DPM_SYSTEM,
        messages=(Message(role="user", content=content),),
        response_format="json_object",
        max_tokens=4096,
    )


def build_am_request(
    step_tool: str,
    subtask: str,
    params: Mapping[str, Any],
    prior_digests: list[dict],
) -> ChatRequest:
    content = (
        f"Subtask: {subtask}\n"
        f"Step tool: {step_tool}\n"
        f"Current parameters (placeholders must be replaced): {json.dumps(params, sort_keys=True)}\n"
        f"Earlier step results:\n{json.dumps(prior_digests, sort_keys=True)}"
    )
    return ChatRequest(
        system_prompt=AM_SYSTEM,
        messages=(Message(role="user", content=content),),
        tool_schemas=PLANNING_TOOLS,
    )


def build_baseline_request(question: str) -> ChatRequest:
    return ChatRequest(
        system_prompt=BASELINE_SYSTEM,
        messages=(Message(role="user", content=question),),
        tool_schemas=PLANNING_TOOLS,
    )


def build_compose_request(question: str, step_digests: list[dict]) -> ChatRequest:
    content = (
        f"Question: {question}\n"
        f"Retrieved data by step:\n{json.dumps(step_digests, sort_keys=True)}"
    )
    return ChatRequest(
        system_prompt=WM_SYSTEM,
        messages=(Message(role="user", content=content),),
        max_tokens=4096,
    )


def build_vm_decide_request(question: str, response_markdown: str, step_digests: list[dict]) -> ChatRequest:
    content = (
        f"Question: {question}\n"
        f"Answer:\n{response_markdown}\n"
        f"Retrieved data by step:\n{json.dumps(step_digests, sort_keys=True)}"
    )
    return ChatRequest(
        system_prompt=VM_DECIDE_SYSTEM,
        messages=(Message(role="user", content=content),),
        response_format="json_object",
    )


def build_vm_charts_request(
    question: str,
    chart_types: list[str],
    step_digests: list[dict],
    feedback: str | None = None,
) -> ChatRequest:
    content = (
        f"Question: {question}\n"
        f"Suggested chart types: {json.dumps(chart_types)}\n"
        f"Retrieved data by step:\n{json.dumps(step_digests, sort_keys=True)}"
    )
    messages = [Message(role="user", content=content)]
    if feedback:
        messages.append(Message(role="user", content=feedback))
    return ChatRequest(
        system_prompt=VM_CHARTS_SYSTEM,
        messages=tuple(messages),
        response_format="json_object",
        max_tokens=4096,
    )


def build_judge_request(
    question: str,
    response_markdown: str,
    criterion: str,
    levels: list[str],
    data_digest: str,
) -> ChatRequest:
    rubric_text = "\n".join(f"{i}: {text}" for i, text in enumerate(levels, 1))
    content = (
        f"Criterion: {criterion}\n"
        f"Levels:\n{rubric_text}\n\n"
        f"Question: {question}\n\n"
        f"Retrieved data (input to the answer):\n{data_digest}\n\n"
        f"Answer to grade:\n{response_markdown}"
    )
    return ChatRequest(
        system_prompt=JUDGE_SYSTEM,
        messages=(Message(role="user", content=content),),
        response_format="json_object",
    )


def repair_request(request: ChatRequest, bad_output: str, problem: str) -> ChatRequest:
    """One re-prompt carrying the previous output and what was wrong."""
    return request.with_messages(
        Message(role="assistant", content=bad_output),
        Message(
            role="user",
            content=f"Your previous reply was invalid: {problem}\n"
            "Reply again, correcting this, with JSON only.",
        ),
    )
