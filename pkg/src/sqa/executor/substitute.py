"""Placeholder substitution for dependent plan steps.

Two paths are mechanical and never need a model:

* ``$step<k>.top_entity_id``: the id of the top-ranked entity in step
  k's facet result.
* ``$step<k>.article_ids``: the article ids of step k's search result.

Anything else cannot be substituted mechanically and flags the step for
model-inferred parameters. A referenced result with zero rows is an
error: the dependent step must fail visibly, not run a silently empty
query.
"""

from __future__ import annotations

from typing import Any, Mapping

from ..errors import EmptyDependencyError
from ..gateway.toolschema import PLACEHOLDER_RE
from ..search import ArticleResultSet, FacetResultSet
from .trace import StepResult


class _Inference(Exception):
    """Internal: a placeholder path needs model inference."""


def _resolve_path(placeholder: str, prior: Mapping[int, StepResult]):
    match = PLACEHOLDER_RE.fullmatch(placeholder)
    step_id, path = int(match.group(1)), match.group(2)
    result = prior.get(step_id)
    if result is None or result.payload is None:
        raise EmptyDependencyError(f"{placeholder}: step {step_id} has no result payload")
    payload = result.payload
    if len(payload) == 0:
        raise EmptyDependencyError(f"{placeholder}: step {step_id} returned no rows")
    if path == "top_entity_id" and isinstance(payload, FacetResultSet):
        return payload.rows[0].id
    if path == "article_ids" and isinstance(payload, ArticleResultSet):
        return [row.id for row in payload.rows]
    raise _Inference(placeholder)


def substitute_placeholders(
    params: Mapping[str, Any], prior: Mapping[int, StepResult]
) -> tuple[dict, bool]:
    """Replace mechanical placeholders; returns (params, needs_inference).

    Raises EmptyDependencyError when a referenced result is empty.
    Unresolvable paths are left in place and reported via the flag.
    """
    needs_inference = False

    def walk(value):
        nonlocal needs_inference
        if isinstance(value, str) and PLACEHOLDER_RE.fullmatch(value):
            try:
                return _resolve_path(value, prior)
            except _Inference:
                needs_inference = True
                return value
        if isinstance(value, Mapping):
            return {k: walk(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [walk(v) for v in value]
        return value

    return walk(dict(params)), needs_inference
