"""Rule-based query assembly from tool parameters.

Two entry points share the same assembly core:

* ``QueryBuilder.build`` is the lenient path used by the plan executor.
  It repairs common parameter mistakes (numeric strings as years, entity
  names instead of ids, duplicate filters, unknown keys) and records
  every repair as a warning, so nothing is corrected silently.
* ``QueryBuilder.build_strict`` applies no repairs at all. Structural
  problems raise immediately and unknown ids are kept verbatim, which
  makes semantically wrong filters come back as empty result sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal, Mapping

from ..corpus import Corpus, EntityType
from ..errors import AssemblyError, InvalidFacetError
from ..resolver import EntityResolver
from .ast import And, ArticleIn, EntityIn, MatchAll, Node, Not, Or, YearBetween, canonicalize

ARTICLE_METRICS = ("citation_count", "fwci")
FACET_METRICS = ("document_count", "total_citations", "average_fwci")
DEFAULT_LIMIT = 25
DEFAULT_TOP_N = 10

_PARAM_KEYS = {
    "filters",
    "year_range",
    "connective",
    "article_ids",
    "limit",
    "metrics",
    "facet_type",
    "top_n",
    "facet_metrics",
}


@dataclass(frozen=True)
class EntityFilter:
    type: EntityType
    id: str
    negate: bool = False


@dataclass(frozen=True)
class QueryParams:
    entity_filters: tuple[EntityFilter, ...] = ()
    year_range: tuple[int, int] | None = None
    connective: Literal["AND", "OR"] = "AND"
    article_ids: tuple[str, ...] | None = None
    limit: int = DEFAULT_LIMIT
    metrics: tuple[str, ...] = ()


@dataclass(frozen=True)
class FacetRequest:
    facet_type: EntityType
    top_n: int = DEFAULT_TOP_N
    metrics: tuple[str, ...] = FACET_METRICS


@dataclass
class BuiltQuery:
    ast: Node
    params: QueryParams
    warnings: list[str] = field(default_factory=list)


def _as_year(value: Any, lenient: bool, warnings: list[str], label: str) -> int:
    if isinstance(value, bool):
        raise AssemblyError(f"{label} must be an integer year, got {value!r}")
    if isinstance(value, int):
        return value
    if lenient and isinstance(value, str) and value.strip().lstrip("-").isdigit():
        warnings.append(f"{label}: parsed numeric string {value!r} as a year")
        return int(value.strip())
    raise AssemblyError(f"{label} must be an integer year, got {value!r}")


def _as_entity_type(value: Any, label: str, *, facet: bool = False) -> EntityType:
    if isinstance(value, EntityType):
        return value
    if isinstance(value, str):
        name = value.strip().upper()
        if name == "ARTICLE" and facet:
            raise InvalidFacetError(
                f"{label}: articles are aggregated, never referenced directly"
            )
        try:
            return EntityType(name)
        except ValueError:
            pass
    raise AssemblyError(f"{label}: unknown entity type {value!r}")


def params_from_raw(
    raw: Mapping[str, Any], *, lenient: bool = True
) -> tuple[QueryParams, FacetRequest | None, list[str]]:
    """Normalize a raw tool-argument map into typed query parameters.

    In lenient mode unknown keys are dropped with a warning and numeric
    strings are coerced; in strict mode both raise AssemblyError.
    """
    warnings: list[str] = []
    if not isinstance(raw, Mapping):
        raise AssemblyError(f"parameters must be an object, got {type(raw).__name__}")

    unknown = sorted(set(raw) - _PARAM_KEYS)
    if unknown:
        if not lenient:
            raise AssemblyError(f"unknown parameter keys: {', '.join(unknown)}")
        warnings.append(f"dropped unknown parameter keys: {', '.join(unknown)}")

    filters: list[EntityFilter] = []
    raw_filters = raw.get("filters", [])
    if not isinstance(raw_filters, list):
        raise AssemblyError("filters must be a list")
    for i, item in enumerate(raw_filters):
        if isinstance(item, EntityFilter):
            filters.append(item)
            continue
        if not isinstance(item, Mapping):
            raise AssemblyError(f"filters[{i}] must be an object")
        etype = _as_entity_type(item.get("type"), f"filters[{i}].type")
        ident = item.get("id")
        if not isinstance(ident, str) or not ident:
            raise AssemblyError(f"filters[{i}].id must be a non-empty string")
        negate = item.get("negate", False)
        if not isinstance(negate, bool):
            raise AssemblyError(f"filters[{i}].negate must be a boolean")
        extra = set(item) - {"type", "id", "negate"}
        if extra:
            if not lenient:
                raise AssemblyError(f"filters[{i}]: unknown keys {sorted(extra)}")
            warnings.append(f"filters[{i}]: dropped unknown keys {sorted(extra)}")
        filters.append(EntityFilter(type=etype, id=ident, negate=negate))

    deduped: list[EntityFilter] = []
    for f in filters:
        if f in deduped:
            if lenient:
                warnings.append(f"deduplicated repeated filter {f.type.value}({f.id})")
                continue
        deduped.append(f)

    year_range = None
    raw_year = raw.get("year_range")
    if raw_year is not None:
        if isinstance(raw_year, Mapping):
            lo_raw, hi_raw = raw_year.get("min"), raw_year.get("max")
        elif isinstance(raw_year, (list, tuple)) and len(raw_year) == 2:
            lo_raw, hi_raw = raw_year
        else:
            raise AssemblyError(f"year_range must be {{min, max}}, got {raw_year!r}")
        lo = _as_year(lo_raw, lenient, warnings, "year_range.min")
        hi = _as_year(hi_raw, lenient, warnings, "year_range.max")
        year_range = (lo, hi)

    connective = raw.get("connective", "AND")
    if connective not in ("AND", "OR"):
        raise AssemblyError(f"connective must be AND or OR, got {connective!r}")

    article_ids = raw.get("article_ids")
    if article_ids is not None:
        if not isinstance(article_ids, list) or not all(
            isinstance(a, str) and a for a in article_ids
        ):
            raise AssemblyError("article_ids must be a list of article id strings")
        article_ids = tuple(article_ids)

    limit = raw.get("limit", DEFAULT_LIMIT)
    if lenient and isinstance(limit, str) and limit.strip().isdigit():
        warnings.append(f"limit: parsed numeric string {limit!r}")
        limit = int(limit)
    if not isinstance(limit, int) or isinstance(limit, bool):
        raise AssemblyError(f"limit must be a positive integer, got {limit!r}")
    if limit < 1:
        if lenient:
            warnings.append(f"limit {limit} raised to 1")
            limit = 1
        else:
            raise AssemblyError(f"limit must be >= 1, got {limit}")

    metrics = tuple(raw.get("metrics", ()))
    bad = [m for m in metrics if m not in ARTICLE_METRICS]
    if bad:
        if lenient:
            warnings.append(f"dropped unknown metrics: {', '.join(bad)}")
            metrics = tuple(m for m in metrics if m in ARTICLE_METRICS)
        else:
            raise AssemblyError(f"unknown metrics: {', '.join(bad)}")

    params = QueryParams(
        entity_filters=tuple(deduped),
        year_range=year_range,
        connective=connective,
        article_ids=article_ids,
        limit=limit,
        metrics=metrics,
    )

    facet = None
    if "facet_type" in raw:
        facet_type = _as_entity_type(raw.get("facet_type"), "facet_type", facet=True)
        top_n = raw.get("top_n", DEFAULT_TOP_N)
        if lenient and isinstance(top_n, str) and top_n.strip().isdigit():
            warnings.append(f"top_n: parsed numeric string {top_n!r}")
            top_n = int(top_n)
        if not isinstance(top_n, int) or isinstance(top_n, bool) or top_n < 1:
            if lenient and isinstance(top_n, int) and not isinstance(top_n, bool):
                warnings.append(f"top_n {top_n} raised to 1")
                top_n = 1
            else:
                raise AssemblyError(f"top_n must be a positive integer, got {top_n!r}")
        fmetrics = tuple(raw.get("facet_metrics", FACET_METRICS))
        bad = [m for m in fmetrics if m not in FACET_METRICS]
        if bad:
            if lenient:
                warnings.append(f"dropped unknown facet metrics: {', '.join(bad)}")
                fmetrics = tuple(m for m in fmetrics if m in FACET_METRICS) or FACET_METRICS
            else:
                raise AssemblyError(f"unknown facet metrics: {', '.join(bad)}")
        facet = FacetRequest(facet_type=facet_type, top_n=top_n, metrics=fmetrics)

    return params, facet, warnings


class QueryBuilder:
    """Assembles canonical query trees, optionally repairing parameters."""

    def __init__(self, corpus: Corpus, resolver: EntityResolver | None = None):
        self.corpus = corpus
        self.resolver = resolver or EntityResolver(corpus)

    def build(self, params: QueryParams | Mapping[str, Any]) -> BuiltQuery:
        """Lenient assembly: repair, resolve names, and warn about it."""
        warnings: list[str] = []
        if not isinstance(params, QueryParams):
            params, _, warnings = params_from_raw(params, lenient=True)
        return self._assemble(params, warnings, repair=True)

    def build_strict(self, params: QueryParams | Mapping[str, Any]) -> BuiltQuery:
        """No-repair assembly: ids are taken verbatim, mistakes surface."""
        if not isinstance(params, QueryParams):
            params, _, _ = params_from_raw(params, lenient=False)
        return self._assemble(params, [], repair=False)

    def _assemble(self, params: QueryParams, warnings: list[str], repair: bool) -> BuiltQuery:
        resolved_filters: list[EntityFilter] = []
        for f in params.entity_filters:
            if self.corpus.get_entity(f.id, f.type) is not None or not repair:
                resolved_filters.append(f)
                continue
            # The id is unknown for this type. Treat it as a surface name
            # and try resolution before giving up; a wrong-type id (for
            # example a subject-area id in a topic filter) fails here
            # loudly instead of executing a never-matching query.
            try:
                ranked = self.resolver.resolve(f.id, f.type)
            except Exception:
                ranked = None
            if ranked is not None and ranked.best is not None:
                best = ranked.best
                warnings.append(
                    f"filter {f.type.value}({f.id!r}): resolved name to id {best.id} ({best.name})"
                )
                resolved_filters.append(EntityFilter(type=f.type, id=best.id, negate=f.negate))
            else:
                raise AssemblyError(
                    f"filter {f.type.value}({f.id!r}): not a known {f.type.value} id "
                    "and name resolution found no match"
                )

        year_atom: Node | None = None
        if params.year_range is not None:
            lo, hi = params.year_range
            if lo > hi:
                raise AssemblyError(f"year range is inverted: {lo} > {hi}")
            year_atom = YearBetween(lo, hi)

        groups: dict[EntityType, list[Node]] = {}
        for f in resolved_filters:
            atom: Node = EntityIn(f.type, f.id)
            if f.negate:
                atom = Not(atom)
            groups.setdefault(f.type, []).append(atom)

        group_nodes: list[Node] = [
            Or(tuple(atoms)) if len(atoms) > 1 else atoms[0] for atoms in groups.values()
        ]
        if group_nodes:
            entity_part: Node = (
                And(tuple(group_nodes)) if params.connective == "AND" else Or(tuple(group_nodes))
            )
        else:
            entity_part = MatchAll()

        conjuncts: list[Node] = [entity_part]
        if year_atom is not None:
            conjuncts.append(year_atom)
        if params.article_ids is not None:
            conjuncts.append(ArticleIn(tuple(params.article_ids)))

        normalized = QueryParams(
            entity_filters=tuple(resolved_filters),
            year_range=params.year_range,
            connective=params.connective,
            article_ids=params.article_ids,
            limit=params.limit,
            metrics=params.metrics,
        )
        ast = canonicalize(And(tuple(conjuncts)))
        return BuiltQuery(ast=ast, params=normalized, warnings=warnings)
