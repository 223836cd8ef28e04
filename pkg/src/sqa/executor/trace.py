"""Execution trace types: per-step results and the whole-run record."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from ..gateway.types import CallRecord
from ..planner.types import Plan
from ..search import ArticleResultSet, FacetResultSet, ResultSet

Status = Literal["ok", "empty", "failed"]

DIGEST_ROW_CAP = 20


@dataclass
class StepResult:
    step_id: int
    tool: str
    assembled_query: str | None
    payload: ResultSet | None
    status: Status
    error: str | None = None
    timing_ms: int = 0
    started_ms: int = 0
    finished_ms: int = 0
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.status == "failed":
            assert self.payload is None, "failed results carry an error, never a payload"
        elif self.payload is not None:
            expected = "empty" if len(self.payload) == 0 else "ok"
            assert self.status == expected, f"status {self.status} vs payload rows {len(self.payload)}"

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def digest(self, row_cap: int = DIGEST_ROW_CAP) -> dict:
        """Bounded JSON view handed to models and judges."""
        body: dict = {
            "step": self.step_id,
            "tool": self.tool,
            "status": self.status,
        }
        if self.assembled_query is not None:
            body["query"] = self.assembled_query
        if self.error is not None:
            body["error"] = self.error
        if self.payload is not None:
            payload = self.payload.to_json()
            payload["rows"] = payload["rows"][:row_cap]
            body["result"] = payload
        return body

    def to_json(self) -> dict:
        return {
            "step_id": self.step_id,
            "tool": self.tool,
            "assembled_query": self.assembled_query,
            "status": self.status,
            "error": self.error,
            "timing_ms": self.timing_ms,
            "started_ms": self.started_ms,
            "finished_ms": self.finished_ms,
            "warnings": list(self.warnings),
            "payload": self.payload.to_json() if self.payload is not None else None,
        }


@dataclass
class RunTrace:
    mode: Literal["workflow", "baseline"]
    plan: Plan | None
    results: dict[int, StepResult] = field(default_factory=dict)
    wall_clock_ms: int = 0
    usage: list[CallRecord] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok_results(self) -> list[StepResult]:
        return [r for r in self.results.values() if r.ok]

    def all_empty_or_failed(self) -> bool:
        return all(r.status in ("empty", "failed") for r in self.results.values())

    def step_digests(self, row_cap: int = DIGEST_ROW_CAP) -> list[dict]:
        return [self.results[k].digest(row_cap) for k in sorted(self.results)]

    def article_ids(self) -> set[str]:
        ids: set[str] = set()
        for result in self.results.values():
            if isinstance(result.payload, ArticleResultSet):
                ids.update(row.id for row in result.payload.rows)
        return ids

    def entity_ids(self) -> set[tuple[str, str]]:
        """(entity type value, id) pairs present in facet payloads."""
        pairs: set[tuple[str, str]] = set()
        for result in self.results.values():
            if isinstance(result.payload, FacetResultSet):
                pairs.update(
                    (result.payload.facet_type.value, row.id) for row in result.payload.rows
                )
        return pairs

    def numeric_cells(self) -> set[float]:
        """Every numeric value in any payload; chart traceability source."""
        cells: set[float] = set()
        for result in self.results.values():
            payload = result.payload
            if payload is None:
                continue
            for row in payload.rows:
                values = [row.to_json().get(k) for k in row.to_json()]
                for v in values:
                    if isinstance(v, (int, float)) and not isinstance(v, bool):
                        cells.add(v)
        return cells

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "plan": self.plan.to_json() if self.plan is not None else None,
            "results": {str(k): self.results[k].to_json() for k in sorted(self.results)},
            "wall_clock_ms": self.wall_clock_ms,
            "usage": [u.to_json() for u in self.usage],
            "warnings": list(self.warnings),
        }
