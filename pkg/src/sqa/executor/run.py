"""Plan execution with dependency barriers and bounded concurrency.

Scheduling contract: a step starts only after all of its dependencies
have final results; steps with disjoint dependencies may overlap in
time; results are keyed by step id, so the trace payload is independent
of the actual interleaving. A failed dependency fails its dependents
immediately with a cause chain and no tool call; unrelated branches
keep executing.
"""

from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from typing import Callable, Mapping

from ..errors import EmptyDependencyError, SqaError
from ..gateway.core import UTILITY_PROFILE, GatewaySession
from ..planner.types import Plan, PlanStep
from ..query.ast import serialize
from ..query.build import QueryBuilder, params_from_raw
from ..search import SearchEngine
from .prompts_glue import build_step_inference_request
from .substitute import substitute_placeholders
from .trace import RunTrace, StepResult

logger = logging.getLogger(__name__)

STEP_CONCURRENCY_CAP = 8


class ToolRunner:
    """Executes one validated tool invocation against the search engine.

    Tests substitute a latency-injecting runner here to exercise the
    scheduler without touching real work.
    """

    def __init__(self, engine: SearchEngine, builder: QueryBuilder):
        self.engine = engine
        self.builder = builder

    def run(self, tool: str, params: Mapping) -> tuple[str, object, list[str]]:
        """Returns (assembled canonical query, payload, warnings)."""
        qparams, facet, warnings = params_from_raw(params, lenient=True)
        built = self.builder.build(qparams)
        warnings.extend(built.warnings)
        if tool == "article_search":
            payload = self.engine.article_search(
                built.ast, limit=built.params.limit, metrics=built.params.metrics
            )
        elif tool == "faceted_article_search":
            if facet is None:
                raise SqaError("faceted_article_search requires facet_type")
            payload = self.engine.faceted_article_search(built.ast, facet)
        else:
            raise SqaError(f"unknown tool {tool!r}")
        return serialize(built.ast), payload, warnings


class PlanExecutor:
    def __init__(
        self,
        runner: ToolRunner,
        session_factory: Callable[[], GatewaySession] | None = None,
        concurrency: int = STEP_CONCURRENCY_CAP,
        clock: Callable[[], float] = time.monotonic,
        pre_step_hook: Callable[[PlanStep], None] | None = None,
        inference_profile: str = UTILITY_PROFILE,
    ):
        self.runner = runner
        self.concurrency = concurrency
        self.clock = clock
        self.pre_step_hook = pre_step_hook
        self.inference_profile = inference_profile
        self._session_factory = session_factory

    def execute(self, plan: Plan, session: GatewaySession | None = None) -> RunTrace:
        if session is None and self._session_factory is not None:
            session = self._session_factory()
        started = self.clock()
        results: dict[int, StepResult] = {}
        lock = threading.Lock()
        pending = {step.id: step for step in plan.steps}

        def final(step_id: int) -> StepResult | None:
            with lock:
                return results.get(step_id)

        def deps_state(step: PlanStep) -> str:
            """'ready', 'blocked', or the id of a failed dependency."""
            with lock:
                for dep in step.depends_on:
                    dep_result = results.get(dep)
                    if dep_result is None:
                        return "blocked"
                    if dep_result.status == "failed":
                        return f"failed:{dep}"
            return "ready"

        def run_step(step: PlanStep) -> StepResult:
            if self.pre_step_hook is not None:
                self.pre_step_hook(step)
            t0 = self.clock()
            prior = {dep: final(dep) for dep in step.depends_on}
            warnings: list[str] = []
            try:
                params, needs_inference = substitute_placeholders(step.params, prior)
                if needs_inference:
                    params = self._infer_params(step, params, prior, session, warnings)
                query, payload, tool_warnings = self.runner.run(step.tool, params)
                warnings.extend(tool_warnings)
                status = "empty" if len(payload) == 0 else "ok"
                result = StepResult(
                    step_id=step.id,
                    tool=step.tool,
                    assembled_query=query,
                    payload=payload,
                    status=status,
                    warnings=warnings,
                )
            except (SqaError, EmptyDependencyError) as exc:
                result = StepResult(
                    step_id=step.id,
                    tool=step.tool,
                    assembled_query=None,
                    payload=None,
                    status="failed",
                    error=str(exc),
                    warnings=warnings,
                )
            t1 = self.clock()
            result.started_ms = int((t0 - started) * 1000)
            result.finished_ms = int((t1 - started) * 1000)
            result.timing_ms = max(result.finished_ms - result.started_ms, 0)
            return result

        with ThreadPoolExecutor(max_workers=max(1, min(self.concurrency, len(pending) or 1))) as pool:
            futures = {}
            while pending or futures:
                # Fail dependents of failed steps without running them,
                # then submit every step whose dependencies are final.
                progressed = True
                while progressed:
                    progressed = False
                    for step_id in sorted(pending):
                        state = deps_state(pending[step_id])
                        if state.startswith("failed:"):
                            dep = state.split(":", 1)[1]
                            now_ms = int((self.clock() - started) * 1000)
                            with lock:
                                results[step_id] = StepResult(
                                    step_id=step_id,
                                    tool=pending[step_id].tool,
                                    assembled_query=None,
                                    payload=None,
                                    status="failed",
                                    error=f"dependency {dep} failed",
                                    started_ms=now_ms,
                                    finished_ms=now_ms,
                                )
                            del pending[step_id]
                            progressed = True
                for step_id in sorted(pending):
                    if step_id not in futures and deps_state(pending[step_id]) == "ready":
                        futures[step_id] = pool.submit(run_step, pending[step_id])
                if not futures:
                    if pending:
                        # Unreachable for validated (acyclic) plans; fail
                        # the stragglers rather than spinning forever.
                        now_ms = int((self.clock() - started) * 1000)
                        for step_id, step in sorted(pending.items()):
                            results[step_id] = StepResult(
                                step_id=step_id,
                                tool=step.tool,
                                assembled_query=None,
                                payload=None,
                                status="failed",
                                error="step never became schedulable",
                                started_ms=now_ms,
                                finished_ms=now_ms,
                            )
                        pending.clear()
                    continue
                done, _ = wait(futures.values(), return_when=FIRST_COMPLETED)
                for step_id in [sid for sid, f in futures.items() if f in done]:
                    result = futures.pop(step_id).result()
                    with lock:
                        results[step_id] = result
                    del pending[step_id]

        trace = RunTrace(
            mode="workflow",
            plan=plan,
            results=results,
            wall_clock_ms=int((self.clock() - started) * 1000),
        )
        if session is not None:
            trace.usage = list(session.calls)
        return trace

    def _infer_params(
        self,
        step: PlanStep,
        params: Mapping,
        prior: Mapping[int, StepResult | None],
        session: GatewaySession | None,
        warnings: list[str],
    ) -> Mapping:
        """Model-inferred parameters for paths substitution cannot fill."""
        if session is None:
            raise SqaError(
                f"step {step.id} needs model-inferred parameters but no session is available"
            )
        digests = [r.digest() for r in prior.values() if r is not None]
        request = build_step_inference_request(step, params, digests)
        invocation = session.tool_call(
            request, self.inference_profile, stage=f"step{step.id}_inference"
        )
        if invocation.name != step.tool:
            raise SqaError(
                f"step {step.id}: inferred call targets {invocation.name!r}, plan says {step.tool!r}"
            )
        warnings.append(f"parameters inferred by model for step {step.id}")
        return dict(invocation.arguments)
