"""Planning data structures: tagged questions and validated plans."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from ..corpus import EntityRef, EntityType


@dataclass(frozen=True)
class Tag:
    text: str
    type: EntityType
    span: tuple[int, int]  # [start, end) character offsets in the question


@dataclass
class TaggedQuestion:
    question: str
    tags: list[Tag]
    outline: list[str]
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "question": self.question,
            "tags": [
                {"text": t.text, "type": t.type.value, "span": list(t.span)} for t in self.tags
            ],
            "outline": list(self.outline),
            "warnings": list(self.warnings),
        }


@dataclass
class Resolutions:
    """Surface text to entity mapping; unresolved names stay explicit."""

    resolved: dict[str, EntityRef] = field(default_factory=dict)
    unresolved: list[tuple[str, EntityType]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "resolved": {text: ref.to_json() for text, ref in self.resolved.items()},
            "unresolved": [{"text": t, "type": ty.value} for t, ty in self.unresolved],
        }


@dataclass(frozen=True)
class PlanStep:
    id: int
    tool: str
    subtask: str
    depends_on: tuple[int, ...]
    params: Mapping[str, Any]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "tool": self.tool,
            "subtask": self.subtask,
            "depends_on": list(self.depends_on),
            "params": _plain(self.params),
        }


def _plain(value):
    if isinstance(value, Mapping):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class Plan:
    steps: list[PlanStep]
    resolved_entities: dict[str, EntityRef] = field(default_factory=dict)

    def step(self, step_id: int) -> PlanStep | None:
        for s in self.steps:
            if s.id == step_id:
                return s
        return None

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "resolved_entities": {t: r.to_json() for t, r in self.resolved_entities.items()},
        }


class PlanShapeError(ValueError):
    """The JSON object does not even have the plan's structural shape."""


def plan_from_json(obj: Any, resolved_entities: dict[str, EntityRef] | None = None) -> Plan:
    """Parse {"steps": [...]} into a Plan; shape errors raise, rule
    violations are left for the validator to report."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, Mapping):
        raise PlanShapeError("plan must be a JSON object")
    raw_steps = obj.get("steps")
    if not isinstance(raw_steps, list):
        raise PlanShapeError("plan.steps must be a list")
    steps: list[PlanStep] = []
    for i, raw in enumerate(raw_steps):
        if not isinstance(raw, Mapping):
            raise PlanShapeError(f"steps[{i}] must be an object")
        step_id = raw.get("id")
        if not isinstance(step_id, int) or isinstance(step_id, bool):
            raise PlanShapeError(f"steps[{i}].id must be an integer")
        tool = raw.get("tool")
        if not isinstance(tool, str):
            raise PlanShapeError(f"steps[{i}].tool must be a string")
        subtask = raw.get("subtask", "")
        if not isinstance(subtask, str):
            raise PlanShapeError(f"steps[{i}].subtask must be a string")
        depends_on = raw.get("depends_on", [])
        if not isinstance(depends_on, list) or not all(
            isinstance(d, int) and not isinstance(d, bool) for d in depends_on
        ):
            raise PlanShapeError(f"steps[{i}].depends_on must be a list of integers")
        params = raw.get("params", {})
        if not isinstance(params, Mapping):
            raise PlanShapeError(f"steps[{i}].params must be an object")
        steps.append(
            PlanStep(
                id=step_id,
                tool=tool,
                subtask=subtask,
                depends_on=tuple(depends_on),
                params=dict(params),
            )
        )
    return Plan(steps=steps, resolved_entities=dict(resolved_entities or {}))
