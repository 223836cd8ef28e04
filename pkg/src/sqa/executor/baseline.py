"""The naive single-shot pipeline used as the evaluation baseline.

One tool call straight from the raw question, then execution of the raw
arguments with no repair layer: no numeric-string coercion, no name
resolution, no unknown-key tolerance. Whatever the model got wrong
surfaces as a failed or empty step, which is the point of comparing
against it.
"""

from __future__ import annotations

import logging
import time
from typing import Callable

from ..errors import EmptyDependencyError, SqaError
from ..gateway.core import UTILITY_PROFILE, GatewaySession
from ..planner.prompts import build_baseline_request
from ..query.ast import serialize
from ..query.build import QueryBuilder, params_from_raw
from ..search import SearchEngine
from .trace import RunTrace, StepResult

logger = logging.getLogger(__name__)


def run_baseline(
    question: str,
    session: GatewaySession,
    engine: SearchEngine,
    builder: QueryBuilder,
    profile: str = UTILITY_PROFILE,
    clock: Callable[[], float] = time.monotonic,
) -> RunTrace:
    started = clock()
    trace = RunTrace(mode="baseline", plan=None)
    t0 = clock()
    try:
        invocation = session.tool_call(
            build_baseline_request(question),
            profile,
            stage="baseline_tool_call",
        )
        params, facet, _ = params_from_raw(dict(invocation.arguments), lenient=False)
        built = builder.build_strict(params)
        if invocation.name == "article_search":
            payload = engine.article_search(built.ast, limit=params.limit, metrics=params.metrics)
        elif invocation.name == "faceted_article_search":
            if facet is None:
                raise SqaError("faceted_article_search requires facet_type")
            payload = engine.faceted_article_search(built.ast, facet)
        else:
            raise SqaError(f"unknown tool {invocation.name!r}")
        result = StepResult(
            step_id=1,
            tool=invocation.name,
            assembled_query=serialize(built.ast),
            payload=payload,
            status="empty" if len(payload) == 0 else "ok",
        )
    except (SqaError, EmptyDependencyError) as exc:
        logger.info("baseline step failed: %s", exc)
        result = StepResult(
            step_id=1,
            tool="unknown",
            assembled_query=None,
            payload=None,
            status="failed",
            error=str(exc),
        )
    t1 = clock()
    result.started_ms = int((t0 - started) * 1000)
    result.finished_ms = int((t1 - started) * 1000)
    result.timing_ms = max(result.finished_ms - result.started_ms, 0)
    trace.results[1] = result
    trace.wall_clock_ms = int((clock() - started) * 1000)
    trace.usage = list(session.calls)
    return trace
