"""The two tools exposed for planning, plus argument validation.

Only article search and faceted article search are plannable. Keeping
the tool set this small moves all of the difficulty into parameter
generation, which the downstream assembler can check and repair.
"""

from __future__ import annotations

import re
from typing import Any, Mapping

from ..corpus import EntityType
from .types import ToolSchema

PLACEHOLDER_RE = re.compile(r"^\$step(\d+)\.([A-Za-z_][A-Za-z0-9_.\[\]]*)$")

_ENTITY_TYPE_NAMES = [t.value for t in EntityType]

_FILTERS_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "type": {"type": "string", "enum": _ENTITY_TYPE_NAMES},
            "id": {"type": "string"},
            "negate": {"type": "boolean"},
        },
        "required": ["type", "id"],
        "additionalProperties": False,
    },
}

_YEAR_RANGE_SCHEMA = {
    "type": "object",
    "properties": {"min": {"type": "integer"}, "max": {"type": "integer"}},
    "required": ["min", "max"],
    "additionalProperties": False,
}

_COMMON_PROPERTIES = {
    "filters": _FILTERS_SCHEMA,
    "year_range": _YEAR_RANGE_SCHEMA,
    "connective": {"type": "string", "enum": ["AND", "OR"]},
    "article_ids": {"type": "array", "items": {"type": "string"}},
}

ARTICLE_SEARCH_SCHEMA = ToolSchema(
    name="article_search",
    description=(
        "Retrieve articles matching entity filters, an optional publication year "
        "range, and an optional explicit article id set. Results are ordered by "
        "descending citation count. Requested metrics are attached per article."
    ),
    parameters={
        "type": "object",
        "properties": {
            **_COMMON_PROPERTIES,
            "limit": {"type": "integer", "minimum": 1},
            "metrics": {
                "type": "array",
                "items": {"type": "string", "enum": ["citation_count", "fwci"]},
            },
        },
        "additionalProperties": False,
    },
)

FACETED_SEARCH_SCHEMA = ToolSchema(
    name="faceted_article_search",
    description=(
        "Aggregate the top entities of one type over the set of articles matching "
        "the filters. Entities are ranked by the number of matching articles that "
        "mention them; requested aggregate metrics are attached per entity."
    ),
    parameters={
        "type": "object",
        "properties": {
            **_COMMON_PROPERTIES,
            "facet_type": {"type": "string", "enum": _ENTITY_TYPE_NAMES},
            "top_n": {"type": "integer", "minimum": 1},
            "facet_metrics": {
                "type": "array",
                "items": {
                    "type": "string",
                    "enum": ["document_count", "total_citations", "average_fwci"],
                },
            },
        },
        "required": ["facet_type"],
        "additionalProperties": False,
    },
)

PLANNING_TOOLS: tuple[ToolSchema, ...] = (ARTICLE_SEARCH_SCHEMA, FACETED_SEARCH_SCHEMA)
PLANNING_TOOL_NAMES = tuple(t.name for t in PLANNING_TOOLS)


def is_placeholder(value: Any) -> bool:
    return isinstance(value, str) and PLACEHOLDER_RE.fullmatch(value) is not None


def validate_arguments(
    schema: Mapping[str, Any],
    value: Any,
    *,
    coerce_numeric_strings: bool = False,
    allow_placeholders: bool = False,
    path: str = "$",
) -> list[str]:
    """Check a value against a schema subset; returns human-readable errors.

    Supports: type (object/array/string/integer/number/boolean), enum,
    properties/required/additionalProperties, items, minimum. When
    ``allow_placeholders`` is set, a ``$step<k>.<path>`` string satisfies
    any expected type, since its value arrives at execution time.
    """
    errors: list[str] = []
    if allow_placeholders and is_placeholder(value):
        return errors

    expected = schema.get("type")
    if expected == "object":
        if not isinstance(value, Mapping):
            return [f"{path}: expected an object, got {type(value).__name__}"]
        props = schema.get("properties", {})
        for key in schema.get("required", []):
            if key not in value:
                errors.append(f"{path}.{key}: required key is missing")
        for key, sub in value.items():
            if key in props:
                errors.extend(
                    validate_arguments(
                        props[key],
                        sub,
                        coerce_numeric_strings=coerce_numeric_strings,
                        allow_placeholders=allow_placeholders,
                        path=f"{path}.{key}",
                    )
                )
            elif schema.get("additionalProperties") is False:
                errors.append(f"{path}.{key}: unknown key")
        return errors

    if expected == "array":
        if allow_placeholders and is_placeholder(value):
            return errors
        if not isinstance(value, list):
            return [f"{path}: expected an array, got {type(value).__name__}"]
        item_schema = schema.get("items")
        if item_schema:
            for i, item in enumerate(value):
                errors.extend(
                    validate_arguments(
                        item_schema,
                        item,
                        coerce_numeric_strings=coerce_numeric_strings,
                        allow_placeholders=allow_placeholders,
                        path=f"{path}[{i}]",
                    )
                )
        return errors

    if expected == "string":
        if not isinstance(value, str):
            return [f"{path}: expected a string, got {type(value).__name__}"]
        enum = schema.get("enum")
        if enum and value not in enum:
            errors.append(f"{path}: {value!r} is not one of {enum}")
        return errors

    if expected == "integer":
        if isinstance(value, bool):
            return [f"{path}: expected an integer, got a boolean"]
        if isinstance(value, int):
            pass
        elif coerce_numeric_strings and isinstance(value, str) and value.strip().lstrip("-").isdigit():
            value = int(value.strip())
        else:
            return [f"{path}: expected an integer, got {value!r}"]
        minimum = schema.get("minimum")
        if minimum is not None and value < minimum:
            errors.append(f"{path}: {value} is below the minimum {minimum}")
        return errors

    if expected == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return [f"{path}: expected a number, got {value!r}"]
        return errors

    if expected == "boolean":
        if not isinstance(value, bool):
            return [f"{path}: expected a boolean, got {value!r}"]
        return errors

    return errors


def schema_for(tool_name: str) -> ToolSchema | None:
    for schema in PLANNING_TOOLS:
        if schema.name == tool_name:
            return schema
    return None
