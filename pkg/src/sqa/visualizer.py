"""Chart planning: decide, specify, validate, repair.

The model never emits plotting code, only declarative chart specs. Each
spec is validated against the trace: shape rules plus a traceability
rule that every plotted number occurs verbatim in some retrieved payload
cell, which makes chart-level invention structurally impossible.
Validation errors are fed back to the model for up to three generation
rounds; specs still invalid after that are dropped with a warning.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Any

from .errors import SqaError
from .executor.trace import RunTrace
from .gateway.core import UTILITY_PROFILE, GatewaySession
from .planner.hlpm import parse_json_reply
from .planner.prompts import build_vm_charts_request, build_vm_decide_request

logger = logging.getLogger(__name__)

CHART_TYPES = ("bar", "grouped_bar", "line", "pie")
MAX_GENERATION_ROUNDS = 3
MIN_PLOTTABLE_ROWS = 2


@dataclass(frozen=True)
class ChartSpec:
    chart_type: str
    title: str
    x_label: str
    categories: tuple[str, ...]
    series: tuple[tuple[str, tuple[float, ...]], ...]
    source_step_ids: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "chart_type": self.chart_type,
            "title": self.title,
            "x": {"label": self.x_label, "categories": list(self.categories)},
            "series": [{"label": label, "values": list(values)} for label, values in self.series],
            "source_step_ids": list(self.source_step_ids),
        }


@dataclass
class PlotDecision:
    wanted: bool
    rationale: str
    chart_types: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "wanted": self.wanted,
            "rationale": self.rationale,
            "chart_types": list(self.chart_types),
        }


def _has_plottable_data(trace: RunTrace) -> bool:
    for result in trace.ok_results:
        if result.payload is None:
            continue
        numeric_rows = 0
        for row in result.payload.rows:
            cells = row.to_json().values()
            if any(isinstance(v, (int, float)) and not isinstance(v, bool) for v in cells):
                numeric_rows += 1
        if numeric_rows >= MIN_PLOTTABLE_ROWS:
            return True
    return False


def decide_plots(
    question: str,
    response_markdown: str,
    trace: RunTrace,
    session: GatewaySession,
    profile: str = UTILITY_PROFILE,
) -> PlotDecision:
    """Ask whether charts help; forced off when there is nothing to plot."""
    if not _has_plottable_data(trace):
        return PlotDecision(wanted=False, rationale="no result has enough numeric rows to plot")
    request = build_vm_decide_request(question, response_markdown, trace.step_digests())
    try:
        obj = _json_or_none(session, request, "vm_decide", profile)
    except SqaError:
        obj = None
    if obj is None:
        # Malformed even after repair: the textual answer stands alone.
        return PlotDecision(wanted=False, rationale="plot decision unparseable; defaulting to none")
    wanted = bool(obj.get("wanted", False))
    proposed = [t for t in obj.get("chart_types", []) if t in CHART_TYPES]
    return PlotDecision(
        wanted=wanted,
        rationale=str(obj.get("rationale", "")),
        chart_types=proposed,
    )


def _json_or_none(session: GatewaySession, request, stage: str, profile: str) -> dict | None:
    completion = session.chat(request, profile, stage=stage)
    try:
        return parse_json_reply(completion.text)
    except json.JSONDecodeError:
        from .planner.prompts import repair_request

        retry = session.chat(
            repair_request(request, completion.text, "not valid JSON"),
            profile,
            stage=f"{stage}_repair",
        )
        try:
            return parse_json_reply(retry.text)
        except json.JSONDecodeError:
            return None


def parse_chart_spec(obj: Any) -> tuple[ChartSpec | None, list[str]]:
    """Structural parse; returns (spec, errors). Shape errors come back
    as violations so they can be fed to the repair loop."""
    if not isinstance(obj, dict):
        return None, ["chart spec must be an object"]
    errors = []
    chart_type = obj.get("chart_type")
    if chart_type not in CHART_TYPES:
        errors.append(f"chart_type must be one of {CHART_TYPES}, got {chart_type!r}")
    x = obj.get("x", {})
    if not isinstance(x, dict):
        errors.append("x must be an object with label and categories")
        x = {}
    categories = x.get("categories", [])
    if not isinstance(categories, list) or not categories:
        errors.append("x.categories must be a non-empty list")
        categories = []
    raw_series = obj.get("series", [])
    if not isinstance(raw_series, list) or not raw_series:
        errors.append("series must be a non-empty list")
        raw_series = []
    series = []
    for i, s in enumerate(raw_series):
        if not isinstance(s, dict):
            errors.append(f"series[{i}] must be an object")
            continue
        values = s.get("values", [])
        if not isinstance(values, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
        ):
            errors.append(f"series[{i}].values must be a list of numbers")
            continue
        series.append((str(s.get("label", f"series {i + 1}")), tuple(values)))
    source = obj.get("source_step_ids", [])
    if not isinstance(source, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in source
    ):
        errors.append("source_step_ids must be a list of step ids")
        source = []
    if errors:
        return None, errors
    return (
        ChartSpec(
            chart_type=chart_type,
            title=str(obj.get("title", "")),
            x_label=str(x.get("label", "")),
            categories=tuple(str(c) for c in categories),
            series=tuple(series),
            source_step_ids=tuple(source),
        ),
        [],
    )


def validate_chart_spec(spec: ChartSpec, trace: RunTrace) -> list[str]:
    """Deterministic shape and traceability checks; [] means valid."""
    violations: list[str] = []
    if spec.chart_type not in CHART_TYPES:
        violations.append(f"chart_type must be one of {CHART_TYPES}")
    if not spec.categories:
        violations.append("x.categories must be non-empty")
    if not spec.series:
        violations.append("series must be non-empty")
    for label, values in spec.series:
        if len(values) != len(spec.categories):
            violations.append(
                f"series {label!r} has {len(values)} values for {len(spec.categories)} categories"
            )
    labels = [label for label, _ in spec.series]
    if len(labels) != len(set(labels)):
        violations.append("duplicate series label")
    if spec.chart_type == "pie":
        if len(spec.series) != 1:
            violations.append("pie takes exactly one series")
        elif any(v < 0 for v in spec.series[0][1]):
            violations.append("pie values must be non-negative")
    cells = trace.numeric_cells()
    for label, values in spec.series:
        for v in values:
            if v not in cells:
                violations.append(f"value {v!r} in series {label!r} is not in any payload cell")
    known_steps = set(trace.results)
    for step_id in spec.source_step_ids:
        if step_id not in known_steps:
            violations.append(f"source step {step_id} is not in the trace")
    return violations


def generate_charts(
    decision: PlotDecision,
    question: str,
    trace: RunTrace,
    session: GatewaySession,
    profile: str = UTILITY_PROFILE,
) -> tuple[list[ChartSpec], list[str]]:
    """Generate and validate specs with error feedback, bounded rounds."""
    if not decision.wanted:
        return [], []
    warnings: list[str] = []
    valid: list[ChartSpec] = []
    feedback: str | None = None
    for round_no in range(1, MAX_GENERATION_ROUNDS + 1):
        # Exactly one model call per round; unparseable output burns the
        # round instead of triggering a separate JSON repair.
        request = build_vm_charts_request(
            question, decision.chart_types, trace.step_digests(), feedback
        )
        completion = session.chat(request, profile, stage=f"vm_charts_round{round_no}")
        try:
            obj = parse_json_reply(completion.text)
        except json.JSONDecodeError:
            obj = None
        if obj is None:
            warnings.append(f"chart round {round_no}: unparseable output")
            feedback = "The previous reply was not valid JSON. Emit the corrected full chart list."
            continue
        raw_list = obj.get("charts", [])
        if not isinstance(raw_list, list):
            raw_list = []
        problems: list[str] = []
        valid = []
        for i, raw in enumerate(raw_list):
            spec, shape_errors = parse_chart_spec(raw)
            if shape_errors:
                problems.extend(f"charts[{i}]: {e}" for e in shape_errors)
                continue
            violations = validate_chart_spec(spec, trace)
            if violations:
                problems.extend(f"charts[{i}]: {v}" for v in violations)
            else:
                valid.append(spec)
        if not problems:
            return valid, warnings
        feedback = (
            "Some chart specifications were invalid:\n- "
            + "\n- ".join(problems)
            + "\nEmit the corrected full chart list."
        )
        warnings.append(f"chart round {round_no}: {len(problems)} violations")
    if not valid:
        warnings.append("no valid chart specs after repairs; returning none")
    else:
        warnings.append("dropped chart specs that stayed invalid after repairs")
    return valid, warnings
