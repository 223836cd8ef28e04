"""Plan validation: every rule a detailed plan must satisfy before it
may be executed.

Rules (codes in parentheses; see docs/plan_rules.md for the normative
definitions shared with the independent checker used in tests):

* DUPLICATE_ID: each step id appears once.
* NON_CONTIGUOUS_IDS: the set of ids is exactly 1..n.
* UNKNOWN_TOOL: the tool is one of the two exposed tools.
* DANGLING_DEPENDENCY: every dependency names an existing step id.
* FORWARD_DEPENDENCY: dependencies only point at smaller ids.
* CYCLE: every step is schedulable; steps stuck behind a dependency
  cycle (directly or transitively) are flagged.
* PLACEHOLDER_VIOLATION: a ``$step<k>.<path>`` value may appear only in
  a step with dependencies, and k must be one of them.
* PARAM_SCHEMA: params conform to the tool's parameter contract, with
  placeholders passing for any type and numeric strings accepted for
  integers (the assembler repairs those later).
* UNKNOWN_ENTITY: literal entity-filter ids exist in the corpus under
  the filter's type, or among the resolved entities attached to the
  plan.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from ..corpus import Corpus, EntityType
from ..gateway.toolschema import PLACEHOLDER_RE, PLANNING_TOOL_NAMES, schema_for, validate_arguments
from .types import Plan, PlanStep


@dataclass(frozen=True)
class Violation:
    step_id: int | None
    code: str
    message: str

    def to_json(self) -> dict:
        return {"step_id": self.step_id, "code": self.code, "message": self.message}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def keys(self) -> set[tuple[int | None, str]]:
        return {(v.step_id, v.code) for v in self.violations}

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [v.to_json() for v in self.violations],
            "warnings": list(self.warnings),
        }


def iter_placeholders(value: Any) -> Iterable[str]:
    """Every full-match placeholder string inside a params structure."""
    if isinstance(value, str):
        if PLACEHOLDER_RE.fullmatch(value):
            yield value
    elif isinstance(value, Mapping):
        for sub in value.values():
            yield from iter_placeholders(sub)
    elif isinstance(value, (list, tuple)):
        for sub in value:
            yield from iter_placeholders(sub)


def _entity_filter_ids(params: Mapping[str, Any]) -> Iterable[tuple[str, str]]:
    filters = params.get("filters")
    if not isinstance(filters, list):
        return
    for item in filters:
        if isinstance(item, Mapping):
            ftype, fid = item.get("type"), item.get("id")
            if isinstance(ftype, str) and isinstance(fid, str):
                yield ftype, fid


def validate_plan(plan: Plan, corpus: Corpus | None = None) -> ValidationReport:
    report = ValidationReport()
    steps = plan.steps
    if not steps:
        report.warnings.append("plan has no steps")
        return report

    ids = [s.id for s in steps]
    id_counts = Counter(ids)
    for step_id, count in sorted(id_counts.items()):
        if count > 1:
            report.violations.append(
                Violation(step_id, "DUPLICATE_ID", f"step id {step_id} appears {count} times")
            )
    unique_ids = set(ids)
    if unique_ids != set(range(1, len(unique_ids) + 1)):
        report.violations.append(
            Violation(None, "NON_CONTIGUOUS_IDS", f"step ids {sorted(unique_ids)} are not 1..n")
        )

    for step in steps:
        if step.tool not in PLANNING_TOOL_NAMES:
            report.violations.append(
                Violation(step.id, "UNKNOWN_TOOL", f"tool {step.tool!r} is not exposed")
            )
        for dep in step.depends_on:
            if dep not in unique_ids:
                report.violations.append(
                    Violation(step.id, "DANGLING_DEPENDENCY", f"depends on missing step {dep}")
                )
            elif dep >= step.id:
                report.violations.append(
                    Violation(step.id, "FORWARD_DEPENDENCY", f"depends on step {dep} >= own id")
                )

    # Kahn's algorithm over the id graph; steps whose id never becomes
    # schedulable sit on or behind a cycle.
    deps_by_id: dict[int, set[int]] = {i: set() for i in unique_ids}
    for step in steps:
        deps_by_id[step.id].update(d for d in step.depends_on if d in unique_ids)
    dependents: dict[int, set[int]] = {i: set() for i in unique_ids}
    for node, deps in deps_by_id.items():
        for dep in deps:
            dependents[dep].add(node)
    indegree = {node: len(deps) for node, deps in deps_by_id.items()}
    queue = sorted(node for node, deg in indegree.items() if deg == 0)
    schedulable: set[int] = set()
    while queue:
        node = queue.pop(0)
        schedulable.add(node)
        for dependent in sorted(dependents[node]):
            indegree[dependent] -= 1
            if indegree[dependent] == 0:
                queue.append(dependent)
    for step in steps:
        if step.id not in schedulable:
            report.violations.append(
                Violation(step.id, "CYCLE", "step is unschedulable due to a dependency cycle")
            )

    resolved_pairs = {(ref.type.value, ref.id) for ref in plan.resolved_entities.values()}
    for step in steps:
        for placeholder in iter_placeholders(step.params):
            ref = int(PLACEHOLDER_RE.fullmatch(placeholder).group(1))
            if not step.depends_on or ref not in step.depends_on:
                report.violations.append(
                    Violation(
                        step.id,
                        "PLACEHOLDER_VIOLATION",
                        f"{placeholder} does not reference a listed dependency",
                    )
                )

        schema = schema_for(step.tool)
        if schema is not None:
            errors = validate_arguments(
                schema.parameters,
                dict(step.params),
                coerce_numeric_strings=True,
                allow_placeholders=True,
            )
            if errors:
                report.violations.append(
                    Violation(step.id, "PARAM_SCHEMA", "; ".join(errors))
                )

        if corpus is not None:
            for ftype, fid in _entity_filter_ids(step.params):
                if PLACEHOLDER_RE.fullmatch(fid):
                    continue
                try:
                    etype = EntityType(ftype)
                except ValueError:
                    continue  # PARAM_SCHEMA already covers bad type names
                if corpus.get_entity(fid, etype) is None and (ftype, fid) not in resolved_pairs:
                    report.violations.append(
                        Violation(
                            step.id,
                            "UNKNOWN_ENTITY",
                            f"{ftype} id {fid!r} not found in the corpus",
                        )
                    )

    return report
