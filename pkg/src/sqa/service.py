"""End-to-end pipeline: plan, execute, compose, visualize, answer.

Workflow mode runs the full module sequence; baseline mode is the
single-tool-call comparison pipeline with no planning and no charts.
Either way the caller gets an envelope: degraded runs (failed planning,
unresolvable entities, empty retrieval) still produce an honest no-data
answer rather than an exception, while infrastructure failures
(provider down, empty question) raise.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Literal

from .composer import ComposedResponse, RefAudit, Reference, compose
from .corpus import Corpus, ingest_corpus
from .errors import InvalidPlanError, PlannerParseError, SqaError
from .executor.baseline import run_baseline
from .executor.run import PlanExecutor, ToolRunner
from .executor.trace import RunTrace
from .gateway.core import Gateway, GatewaySession
from .metrics import MetricsIndex, compute_metrics
from .planner.dpm import run_dpm
from .planner.hlpm import run_hlpm
from .query.build import QueryBuilder
from .resolver import EntityResolver
from .search import SearchEngine
from .visualizer import ChartSpec, PlotDecision, decide_plots, generate_charts

logger = logging.getLogger(__name__)

Mode = Literal["workflow", "baseline"]


@dataclass
class AnswerEnvelope:
    question: str
    mode: Mode
    answer_markdown: str
    references: list[Reference]
    charts: list[ChartSpec]
    run_id: str
    warnings: list[str] = field(default_factory=list)
    wall_clock_ms: int = 0
    prompt_tokens: int = 0
    completion_tokens: int = 0
    step_timings_ms: dict[int, int] = field(default_factory=dict)

    def to_json(self, include_timings: bool = True) -> dict:
        body = {
            "question": self.question,
            "mode": self.mode,
            "answer_markdown": self.answer_markdown,
            "references": [r.to_json() for r in self.references],
            "charts": [c.to_json() for c in self.charts],
            "run_id": self.run_id,
            "warnings": list(self.warnings),
            "tokens": {
                "prompt": self.prompt_tokens,
                "completion": self.completion_tokens,
            },
        }
        if include_timings:
            body["timings"] = {
                "wall_clock_ms": self.wall_clock_ms,
                "steps_ms": {str(k): v for k, v in sorted(self.step_timings_ms.items())},
            }
        return body


class Pipeline:
    def __init__(
        self,
        corpus: Corpus,
        gateway: Gateway,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.corpus = corpus
        self.gateway = gateway
        self.clock = clock
        self.metrics: MetricsIndex = compute_metrics(corpus)
        self.engine = SearchEngine(corpus, self.metrics)
        self.resolver = EntityResolver(corpus)
        self.builder = QueryBuilder(corpus, self.resolver)
        self.executor = PlanExecutor(ToolRunner(self.engine, self.builder), clock=clock)
        self._traces: dict[str, RunTrace] = {}
        self._trace_lock = threading.Lock()

    @classmethod
    def from_paths(cls, corpus_path: str | Path, gateway: Gateway) -> "Pipeline":
        return cls(ingest_corpus(corpus_path), gateway)

    # ------------------------------------------------------------------

    def run_id(self, question: str, mode: Mode) -> str:
        """Content-addressed: identical runs land on the same id."""
        profile_sig = json.dumps(
            {name: type(p.provider).__name__ for name, p in sorted(self.gateway.profiles.items())},
            sort_keys=True,
        )
        blob = "\x00".join([question, mode, self.corpus.digest, profile_sig])
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def get_trace(self, run_id: str) -> RunTrace | None:
        with self._trace_lock:
            return self._traces.get(run_id)

    # ------------------------------------------------------------------

    def _workflow_trace(self, question: str, session: GatewaySession) -> RunTrace:
        degraded = RunTrace(mode="workflow", plan=None)
        try:
            tagged, resolutions = run_hlpm(question, session, self.resolver)
        except PlannerParseError as exc:
            degraded.warnings.append(f"high-level planning failed: {exc}")
            return degraded
        if resolutions.unresolved:
            # Surface the unmatched names instead of guessing at ids.
            names = ", ".join(f"{text!r} ({t.value})" for text, t in resolutions.unresolved)
            degraded.warnings.append(f"no corpus match for: {names}")
            degraded.warnings.extend(tagged.warnings)
            return degraded
        try:
            plan = run_dpm(tagged, resolutions, self.corpus, session)
        except (PlannerParseError, InvalidPlanError) as exc:
            degraded.warnings.append(f"detailed planning failed: {exc}")
            degraded.warnings.extend(tagged.warnings)
            return degraded
        trace = self.executor.execute(plan, session)
        trace.warnings.extend(tagged.warnings)
        return trace

    def answer(self, question: str, mode: Mode = "workflow") -> AnswerEnvelope:
        if not question or not question.strip():
            raise ValueError("question must be non-empty")
        if mode not in ("workflow", "baseline"):
            raise ValueError(f"mode must be workflow or baseline, got {mode!r}")

        session = self.gateway.session()
        started = self.clock()
        charts: list[ChartSpec] = []
        warnings: list[str] = []

        if mode == "workflow":
            trace = self._workflow_trace(question, session)
            composed = compose(question, trace, session, self.corpus)
            decision = decide_plots(question, composed.markdown, trace, session)
            if decision.wanted:
                charts, chart_warnings = generate_charts(decision, question, trace, session)
                warnings.extend(chart_warnings)
        else:
            trace = run_baseline(question, session, self.engine, self.builder)
            composed = compose(question, trace, session, self.corpus)

        trace.usage = list(session.calls)
        trace.wall_clock_ms = int((self.clock() - started) * 1000)
        run_id = self.run_id(question, mode)
        with self._trace_lock:
            self._traces[run_id] = trace

        warnings = trace.warnings + warnings
        for result in trace.results.values():
            warnings.extend(f"step {result.step_id}: {w}" for w in result.warnings)
        if composed.audit.stripped_refs:
            warnings.extend(
                f"stripped unverifiable link {link} ({reason})"
                for link, reason in composed.audit.stripped_refs
            )

        return AnswerEnvelope(
            question=question,
            mode=mode,
            answer_markdown=composed.markdown,
            references=composed.references,
            charts=charts,
            run_id=run_id,
            warnings=warnings,
            wall_clock_ms=trace.wall_clock_ms,
            prompt_tokens=session.total_prompt_tokens,
            completion_tokens=session.total_completion_tokens,
            step_timings_ms={r.step_id: r.timing_ms for r in trace.results.values()},
        )

    def run_for_eval(self, question: str, mode: Mode) -> tuple[ComposedResponse, RunTrace]:
        """Evaluation entry point: the composed response plus its trace."""
        envelope = self.answer(question, mode)
        trace = self.get_trace(envelope.run_id)
        composed = ComposedResponse(
            markdown=envelope.answer_markdown,
            references=envelope.references,
            audit=RefAudit(),  # the real audit already ran inside answer()
            token_count=envelope.completion_tokens,
        )
        return composed, trace
