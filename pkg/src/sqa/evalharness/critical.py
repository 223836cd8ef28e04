"""Critical data omission: the run retrieved nothing at all even though
a correctly parameterized query over the same corpus returns data."""

from __future__ import annotations

from ..executor.trace import RunTrace
from ..query.build import QueryBuilder, QueryParams
from ..search import SearchEngine


def detect_critical_error(
    trace: RunTrace,
    oracle_params: QueryParams,
    builder: QueryBuilder,
    engine: SearchEngine,
) -> bool:
    """True iff every step came back empty or failed while the
    hand-authored oracle query matches at least one article."""
    if not trace.all_empty_or_failed():
        return False
    built = builder.build(oracle_params)
    oracle_hits = engine.article_search(built.ast, limit=1)
    return oracle_hits.total_matched >= 1
